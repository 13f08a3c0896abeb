//! Monomials, polynomials and monomial ideals over a fixed ordered set of
//! variables. All coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field.
pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Ordered list of distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct VarSet {
    names: Arc<[String]>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(['*', '^', ',', ' ']) || n == "1" {
                return Err(Error::Parse(format!("bad variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate variable {n}")));
            }
        }
        Ok(VarSet { names: names.into() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.len())
    }

    pub fn var(&self, name: &str) -> Result<Monomial> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
        Ok(Monomial::var(self.len(), i))
    }

    /// Parses `x1^2*x3` style text; `1` is the unit monomial.
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let text = text.trim();
        let mut exps = vec![0u32; self.len()];
        if text == "1" {
            return Ok(Monomial { exps });
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} in {text:?}")))?;
            exps[i] += exp;
        }
        Ok(Monomial { exps })
    }

    /// Restricts to the variables not in `dropped` (given as indices).
    pub fn without(&self, dropped: &[usize]) -> VarSet {
        VarSet {
            names: self
                .names
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, n)| n.clone())
                .collect(),
        }
    }
}

impl TryFrom<Vec<String>> for VarSet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        VarSet::new(v)
    }
}

impl From<VarSet> for Vec<String> {
    fn from(v: VarSet) -> Self {
        v.names.to_vec()
    }
}

/// Exponent vector. Ordered lexicographically on exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// Squarefree monomial with support given by a bitmask.
    pub fn from_mask(nvars: usize, mask: u64) -> Self {
        Monomial {
            exps: (0..nvars).map(|i| ((mask >> i) & 1) as u32).collect(),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    /// Bitmask of the support. Only meaningful for at most 64 variables.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1 << i))
    }

    pub fn involves(&self, var: usize) -> bool {
        self.exps[var] > 0
    }

    fn check(&self, other: &Monomial) -> Result<()> {
        if self.exps.len() != other.exps.len() {
            return Err(Error::VarMismatch(self.exps.len(), other.exps.len()));
        }
        Ok(())
    }

    /// `self | other`. Monomials over different variable sets never divide.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        Ok(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        })
    }

    pub fn gcd(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        Ok(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect(),
        })
    }

    /// Exact quotient `self / divisor`.
    pub fn divide(&self, divisor: &Monomial) -> Result<Monomial> {
        self.check(divisor)?;
        if !divisor.divides(self) {
            return Err(Error::NotDivisible {
                dividend: format!("{:?}", self.exps),
                divisor: format!("{:?}", divisor.exps),
            });
        }
        Ok(Monomial {
            exps: self.exps.iter().zip(&divisor.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn display<'a>(&'a self, vars: &'a VarSet) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, vars }
    }

    /// Drops the coordinates listed in `dropped`; errors if any of them is used.
    pub fn without(&self, dropped: &[usize]) -> Result<Monomial> {
        if dropped.iter().any(|&i| self.exps[i] > 0) {
            return Err(Error::invalid("monomial involves a dropped variable"));
        }
        Ok(Monomial {
            exps: self
                .exps
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, &e)| e)
                .collect(),
        })
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        assert_eq!(self.exps.len(), rhs.exps.len(), "monomials over different rings");
        Monomial {
            exps: self.exps.iter().zip(&rhs.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    vars: &'a VarSet,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.mono.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(self.vars.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn monomial_lcm(a: &Monomial, b: &Monomial) -> Result<Monomial> {
    a.lcm(b)
}

pub fn monomial_divide(a: &Monomial, b: &Monomial) -> Result<Monomial> {
    a.divide(b)
}

/// Sparse polynomial with no stored zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(c, m);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial::term(Coeff::one(), m)
    }

    pub fn constant(c: Coeff, nvars: usize) -> Self {
        Polynomial::term(c, Monomial::one(nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, c: Coeff, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(c.clone(), m.clone());
        }
    }

    /// `self += c * m * other`
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Coeff, m: &Monomial) {
        for (om, oc) in &other.terms {
            self.add_term(oc * c, om * m);
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_scaled(other, c, m);
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, oc) in &self.terms {
            out.add_term(oc * c, m.clone());
        }
        out
    }

    /// The single term, if the polynomial has exactly one.
    pub fn as_term(&self) -> Option<(&Coeff, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// The value if this is a nonzero constant.
    pub fn as_nonzero_constant(&self) -> Option<&Coeff> {
        self.as_term().filter(|(_, m)| m.is_one()).map(|(c, _)| c)
    }

    /// Sum of coefficients (evaluation at all variables equal to one).
    pub fn eval_one(&self) -> Coeff {
        self.terms.values().fold(Coeff::zero(), |a, c| a + c)
    }

    /// Sets the variables in `vars` (indices) to zero.
    pub fn kill_vars(&self, vars: &[usize]) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !vars.iter().any(|&v| m.involves(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division of every term by a monomial.
    pub fn divide_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (tm, c) in &self.terms {
            out.add_term(c.clone(), tm.divide(m)?);
        }
        Ok(out)
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Result<Monomial>) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(c.clone(), f(m)?);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, vars: &'a VarSet) -> PolynomialDisplay<'a> {
        PolynomialDisplay { poly: self, vars }
    }

    /// `(coefficient, monomial)` string pairs, the serialized form.
    pub fn to_string_terms(&self, vars: &VarSet) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(m, c)| (c.to_string(), m.display(vars).to_string()))
            .collect()
    }

    pub fn from_string_terms(terms: &[(String, String)], vars: &VarSet) -> Result<Polynomial> {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(parse_coeff(c)?, vars.parse_monomial(m)?);
        }
        Ok(p)
    }
}

pub fn parse_coeff(text: &str) -> Result<Coeff> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("bad coefficient {text:?}")))
}

pub struct PolynomialDisplay<'a> {
    poly: &'a Polynomial,
    vars: &'a VarSet,
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(self.vars))?;
            } else {
                write!(f, "{abs}*{}", m.display(self.vars))?;
            }
        }
        Ok(())
    }
}

/// Removes every generator divisible by another one, keeping the first of
/// any duplicates and the input order of survivors.
pub fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let redundant = gens.iter().enumerate().any(|(j, h)| {
            j != i && h.divides(g) && (h != g || j < i)
        });
        if !redundant {
            out.push(g.clone());
        }
    }
    out
}

/// A monomial ideal given by an ordered list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    vars: VarSet,
    gens: Vec<Monomial>,
    minimal: bool,
}

impl MonomialIdeal {
    /// Builds the ideal, minimalizing the generators.
    pub fn new(vars: VarSet, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            if g.nvars() != vars.len() {
                return Err(Error::VarMismatch(g.nvars(), vars.len()));
            }
        }
        Ok(MonomialIdeal {
            vars,
            gens: minimalize(&gens),
            minimal: true,
        })
    }

    /// Keeps the generators exactly as given; `minimal` is computed.
    pub fn from_generators(vars: VarSet, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            if g.nvars() != vars.len() {
                return Err(Error::VarMismatch(g.nvars(), vars.len()));
            }
        }
        let minimal = minimalize(&gens).len() == gens.len();
        Ok(MonomialIdeal { vars, gens, minimal })
    }

    /// Parses comma separated monomials such as `x*w, y*z`. Generators are
    /// kept in the given order.
    pub fn parse(vars: VarSet, text: &str) -> Result<Self> {
        let gens = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| vars.parse_monomial(s))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::from_generators(vars, gens)
    }

    pub fn zero(vars: VarSet) -> Self {
        MonomialIdeal { vars, gens: Vec::new(), minimal: true }
    }

    pub fn unit(vars: VarSet) -> Self {
        let one = vars.one();
        MonomialIdeal { vars, gens: vec![one], minimal: true }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(Monomial::is_squarefree)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Reorders generators: position `k` of the result is `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.gens.len()];
        if order.len() != self.gens.len() {
            return Err(Error::invalid("order is not a permutation of the generators"));
        }
        for &i in order {
            if i >= seen.len() || seen[i] {
                return Err(Error::invalid("order is not a permutation of the generators"));
            }
            seen[i] = true;
        }
        Ok(MonomialIdeal {
            vars: self.vars.clone(),
            gens: order.iter().map(|&i| self.gens[i].clone()).collect(),
            minimal: self.minimal,
        })
    }

    /// `(I : m)`
    pub fn colon_monomial(&self, m: &Monomial) -> Result<MonomialIdeal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.divide(&g.gcd(m)?))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::new(self.vars.clone(), gens)
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.vars != other.vars {
            return Err(Error::VarMismatch(self.vars.len(), other.vars.len()));
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b)?);
            }
        }
        MonomialIdeal::new(self.vars.clone(), gens)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.vars != other.vars {
            return Err(Error::VarMismatch(self.vars.len(), other.vars.len()));
        }
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        MonomialIdeal::new(self.vars.clone(), gens)
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.display(&self.vars).to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// `(I : J)`, the intersection of `(I : m)` over the generators `m` of `J`.
pub fn ideal_colon(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    if i.vars != j.vars {
        return Err(Error::VarMismatch(i.vars.len(), j.vars.len()));
    }
    let mut acc = MonomialIdeal::unit(i.vars.clone());
    for m in &j.gens {
        acc = acc.intersect(&i.colon_monomial(m)?)?;
    }
    Ok(acc)
}

/// Serialized ideal: ordered variable list plus monomial strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDoc {
    pub variables: Vec<String>,
    pub generators: Vec<String>,
}

impl IdealDoc {
    pub fn from_ideal(i: &MonomialIdeal) -> Self {
        IdealDoc {
            variables: i.vars.names().to_vec(),
            generators: i.gens.iter().map(|g| g.display(&i.vars).to_string()).collect(),
        }
    }

    pub fn to_ideal(&self) -> Result<MonomialIdeal> {
        let vars = VarSet::new(self.variables.clone())?;
        let gens = self
            .generators
            .iter()
            .map(|g| vars.parse_monomial(g))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::from_generators(vars, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyzw() -> VarSet {
        VarSet::new(["x", "y", "z", "w"]).unwrap()
    }

    #[test]
    fn lcm_and_divide() {
        let v = xyzw();
        let xw = v.parse_monomial("x*w").unwrap();
        let yz = v.parse_monomial("y*z").unwrap();
        let all = v.parse_monomial("x*y*z*w").unwrap();
        assert_eq!(monomial_lcm(&xw, &yz).unwrap(), all);
        assert_eq!(monomial_lcm(&xw, &xw).unwrap(), xw);
        assert_eq!(monomial_divide(&all, &yz).unwrap(), xw);
        assert_eq!(monomial_divide(&all, &xw).unwrap(), yz);
        assert!(matches!(monomial_divide(&xw, &yz), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn lcm_of_taylor_example_generators() {
        let v = xyzw();
        let gens: Vec<_> = ["x*w", "y*z", "x*z", "x*y"]
            .iter()
            .map(|s| v.parse_monomial(s).unwrap())
            .collect();
        let l = gens.iter().skip(1).fold(gens[0].clone(), |a, b| a.lcm(b).unwrap());
        assert_eq!(l.display(&v).to_string(), "x*y*z*w");
    }

    #[test]
    fn mismatched_variable_sets() {
        let a = Monomial::one(3);
        let b = Monomial::one(4);
        assert!(matches!(a.lcm(&b), Err(Error::VarMismatch(3, 4))));
    }

    #[test]
    fn minimalize_examples() {
        let v = VarSet::new(["x", "y", "z"]).unwrap();
        let p = |s: &str| v.parse_monomial(s).unwrap();
        assert_eq!(minimalize(&[p("x*y"), p("x*y*z"), p("y*z")]), vec![p("x*y"), p("y*z")]);
        assert_eq!(minimalize(&[]), Vec::<Monomial>::new());
        let w = xyzw();
        let gens: Vec<_> = ["x*w", "y*z", "x*z", "x*y"].iter().map(|s| w.parse_monomial(s).unwrap()).collect();
        assert_eq!(minimalize(&gens), gens);
    }

    #[test]
    fn colon_star_ideal() {
        let v = VarSet::new(["z", "x1", "x2", "y11"]).unwrap();
        let i = MonomialIdeal::parse(v.clone(), "z*x1, z*x2").unwrap();
        let j = MonomialIdeal::parse(v.clone(), "x1*y11").unwrap();
        let c = ideal_colon(&i, &j).unwrap();
        assert_eq!(c.generators(), &[v.parse_monomial("z").unwrap()]);
        let unit = MonomialIdeal::unit(v.clone());
        assert_eq!(ideal_colon(&i, &unit).unwrap().generators(), i.generators());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let v = VarSet::new(["x1", "x3", "y1_1"]).unwrap();
        let m = v.parse_monomial("x1^2*x3").unwrap();
        assert_eq!(m.exponents(), &[2, 1, 0]);
        assert_eq!(m.display(&v).to_string(), "x1^2*x3");
        assert!(v.parse_monomial("q").is_err());
        let p = Polynomial::term(coeff(-3), v.parse_monomial("y1_1").unwrap());
        assert_eq!(p.display(&v).to_string(), "-3*y1_1");
        let back = Polynomial::from_string_terms(&p.to_string_terms(&v), &v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn polynomial_arithmetic_cancels() {
        let v = VarSet::new(["x", "y"]).unwrap();
        let x = Polynomial::monomial(v.var("x").unwrap());
        let mut s = x.clone();
        s.add_assign(&x.neg());
        assert!(s.is_zero());
        let y = Polynomial::monomial(v.var("y").unwrap());
        assert_eq!(x.mul(&y).display(&v).to_string(), "x*y");
    }
}
