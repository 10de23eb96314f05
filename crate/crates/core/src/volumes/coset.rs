//! Coset specifications, the general `SU(N)/∏U(P_i) × ∏U(1)_{SU(Z_j)}`
//! formula, and the textual coset grammar.

use std::fmt;

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};

use super::{
    vol_cpn, vol_flag, vol_grassmann, vol_su, vol_su_over_su_su, vol_u, vol_u1_su, ExactVolume, GrassmannVariant,
};
use super::exact::superfactorial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "group", content = "n")]
pub enum GroupFactor {
    SU(usize),
    U(usize),
    /// The U(1) generated by the Cartan generator `λ_{m²-1}` of SU(m).
    U1OfSU(usize),
}

impl GroupFactor {
    /// Real dimension.
    pub fn parameters(&self) -> usize {
        match *self {
            GroupFactor::SU(n) => (n * n).saturating_sub(1),
            GroupFactor::U(n) => n * n,
            GroupFactor::U1OfSU(_) => 1,
        }
    }

    pub fn volume(&self) -> Result<ExactVolume> {
        match *self {
            GroupFactor::SU(n) => vol_su(n),
            GroupFactor::U(n) => vol_u(n),
            GroupFactor::U1OfSU(m) => vol_u1_su(m),
        }
    }
}

impl fmt::Display for GroupFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFactor::SU(n) => write!(f, "SU({n})"),
            GroupFactor::U(n) => write!(f, "U({n})"),
            GroupFactor::U1OfSU(m) => write!(f, "U1[SU({m})]"),
        }
    }
}

/// `numerator / ∏ denominator`, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSpec {
    numerator: GroupFactor,
    denominator: Vec<GroupFactor>,
}

impl CosetSpec {
    pub fn new(numerator: GroupFactor, denominator: Vec<GroupFactor>) -> Result<Self> {
        let n = match numerator {
            GroupFactor::SU(n) | GroupFactor::U(n) => n,
            GroupFactor::U1OfSU(_) => {
                return Err(Error::Constraint("a coset numerator must be SU(n) or U(n)".into()));
            }
        };
        if n < 2 {
            // U(1) and SU(1) have no Euler chart; vol_u explains the U case
            numerator.volume()?;
        }
        for f in &denominator {
            match *f {
                GroupFactor::U1OfSU(m) if !(2..=n).contains(&m) => {
                    return Err(Error::Constraint(format!(
                        "U1[SU({m})] is not a subgroup of {numerator}: need 2 <= m <= {n}"
                    )));
                }
                GroupFactor::U(1) => {
                    return Err(Error::Constraint(
                        "U(1) in a denominator is ambiguous: name the variant as U1[SU(m)]".into(),
                    ));
                }
                GroupFactor::SU(p) | GroupFactor::U(p) if p < 2 || p > n => {
                    return Err(Error::Constraint(format!("{f} is not a proper factor of {numerator}")));
                }
                _ => {}
            }
        }
        let used: usize = denominator.iter().map(GroupFactor::parameters).sum();
        if used > numerator.parameters() {
            return Err(Error::Constraint(format!(
                "denominator has {used} parameters but {numerator} only has {}",
                numerator.parameters()
            )));
        }
        if numerator == GroupFactor::SU(n) && uses_general_formula(&denominator) {
            let rank: usize = denominator
                .iter()
                .map(|f| match f {
                    GroupFactor::U(p) => *p,
                    _ => 1,
                })
                .sum();
            if rank > n - 1 {
                return Err(Error::Constraint(format!(
                    "sum P_i + y <= N-1 violated: {rank} > {}",
                    n - 1
                )));
            }
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> GroupFactor {
        self.numerator
    }

    pub fn denominator(&self) -> &[GroupFactor] {
        &self.denominator
    }

    /// `vol(numerator) / ∏ vol(denominator factor)`.
    pub fn ratio_volume(&self) -> Result<ExactVolume> {
        let mut v = self.numerator.volume()?;
        for f in &self.denominator {
            v = v / f.volume()?;
        }
        Ok(v)
    }

    /// Volume via the closed form matching the denominator's shape, falling
    /// back to [`ratio_volume`](Self::ratio_volume).
    pub fn volume(&self) -> Result<ExactVolume> {
        match (self.numerator, self.denominator.as_slice()) {
            (_, []) => self.numerator.volume(),
            (GroupFactor::SU(n), [GroupFactor::SU(p), GroupFactor::SU(q)]) => Ok(vol_su_over_su_su(n, *p, *q)?.0),
            (GroupFactor::SU(_), d) if uses_general_formula(d) => vol_general_coset(self),
            (GroupFactor::U(n), [GroupFactor::U(m), GroupFactor::U(k)]) if m + k == n => {
                vol_grassmann(n, *m, GrassmannVariant::Corrected)
            }
            _ => self.ratio_volume(),
        }
    }
}

fn uses_general_formula(d: &[GroupFactor]) -> bool {
    d.iter()
        .all(|f| matches!(f, GroupFactor::U(p) if *p >= 2) || matches!(f, GroupFactor::U1OfSU(_)))
}

impl fmt::Display for CosetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.numerator)?;
        for (i, d) in self.denominator.iter().enumerate() {
            write!(f, "{}{d}", if i == 0 { "/" } else { "x" })?;
        }
        Ok(())
    }
}

/// `SU(N) / ∏_i U(P_i) × ∏_j U(1)_{SU(Z_j)}` with `Σ P_i + y ≤ N-1`, `P_i ≠ 1`:
///
/// `2^{(N-(1+y+ΣP_i))/2} π^{((N-1)(N+2) - 2y - ΣP_i(P_i+1))/2} √N ∏_{k<N} 1/k!
///  ∏_j √((Z_j-1)/Z_j) / ∏_i (√(P_i+1) ∏_{k<P_i} 1/k!)`.
pub fn vol_general_coset(spec: &CosetSpec) -> Result<ExactVolume> {
    let n = match spec.numerator {
        GroupFactor::SU(n) => n,
        other => {
            return Err(Error::Constraint(format!("the general coset formula needs an SU(N) numerator, got {other}")));
        }
    };
    let mut ps = Vec::new();
    let mut zs = Vec::new();
    for f in &spec.denominator {
        match *f {
            GroupFactor::U(p) => ps.push(p),
            GroupFactor::U1OfSU(z) => zs.push(z),
            GroupFactor::SU(_) => {
                return Err(Error::Constraint("the general coset formula takes only U(P) and U1[SU(m)] factors".into()));
            }
        }
    }
    let y = zs.len();
    let sum_p: usize = ps.iter().sum();
    let pi_twice = (n - 1) * (n + 2) - 2 * y - ps.iter().map(|p| p * (p + 1)).sum::<usize>();
    let mut v = ExactVolume::sqrt2_pow(n as i64 - (1 + y + sum_p) as i64)
        * ExactVolume::pi_pow((pi_twice / 2) as i64)
        * ExactVolume::sqrt_of(n as i64, 1)
        * ExactVolume::rational(BigRational::new(BigInt::one(), superfactorial(n)));
    if pi_twice % 2 == 1 {
        unreachable!("(N-1)(N+2) and P(P+1) are even");
    }
    for z in zs {
        v = v * ExactVolume::sqrt_of(z as i64 - 1, z as i64);
    }
    for p in ps {
        v = v / (ExactVolume::sqrt_of(p as i64 + 1, 1)
            * ExactVolume::rational(BigRational::new(BigInt::one(), superfactorial(p))));
    }
    Ok(v)
}

/// A parsed volume expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VolumeExpr {
    Group { group: GroupFactor },
    Coset { spec: CosetSpec },
    CP { n: usize },
    Flag { n: usize },
    Grassmann { n: usize, m: usize },
}

impl VolumeExpr {
    pub fn volume(&self) -> Result<ExactVolume> {
        match self {
            VolumeExpr::Group { group } => group.volume(),
            VolumeExpr::Coset { spec } => spec.volume(),
            VolumeExpr::CP { n } => vol_cpn(*n),
            VolumeExpr::Flag { n } => vol_flag(*n),
            VolumeExpr::Grassmann { n, m } => vol_grassmann(*n, *m, GrassmannVariant::Corrected),
        }
    }
}

enum Term {
    Group(GroupFactor),
    CP(usize),
    Flag(usize),
    Gr(usize, usize),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(1, char::len_utf8);
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {tok:?}")))
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected an integer"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.err("integer too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn paren_int(&mut self) -> Result<usize> {
        self.expect("(")?;
        let v = self.int()?;
        self.expect(")")?;
        Ok(v)
    }

    fn term(&mut self) -> Result<Term> {
        // longest keywords first: "U1[" before "U(", "SU(" before "U("
        if self.eat("SU") {
            Ok(Term::Group(GroupFactor::SU(self.paren_int()?)))
        } else if self.eat("U1") {
            self.expect("[")?;
            self.expect("SU")?;
            let m = self.paren_int()?;
            self.expect("]")?;
            Ok(Term::Group(GroupFactor::U1OfSU(m)))
        } else if self.eat("U") {
            Ok(Term::Group(GroupFactor::U(self.paren_int()?)))
        } else if self.eat("CP") {
            Ok(Term::CP(self.paren_int()?))
        } else if self.eat("Flag") {
            Ok(Term::Flag(self.paren_int()?))
        } else if self.eat("Gr") {
            self.expect("(")?;
            let n = self.int()?;
            self.expect(",")?;
            let m = self.int()?;
            self.expect(")")?;
            Ok(Term::Gr(n, m))
        } else {
            Err(self.err("expected one of SU(n), U(n), U1[SU(m)], CP(n), Flag(n), Gr(n,m)"))
        }
    }

    fn group(&mut self) -> Result<GroupFactor> {
        let at = self.pos;
        match self.term()? {
            Term::Group(g) => Ok(g),
            _ => {
                self.pos = at;
                Err(self.err("CP, Flag and Gr cannot appear in a quotient"))
            }
        }
    }

    fn expr(&mut self) -> Result<VolumeExpr> {
        let head = self.term()?;
        if !self.eat("/") {
            self.skip_ws();
            if !self.rest().is_empty() {
                return Err(self.err("unexpected trailing input"));
            }
            return Ok(match head {
                Term::Group(group) => VolumeExpr::Group { group },
                Term::CP(n) => VolumeExpr::CP { n },
                Term::Flag(n) => VolumeExpr::Flag { n },
                Term::Gr(n, m) => VolumeExpr::Grassmann { n, m },
            });
        }
        let numerator = match head {
            Term::Group(g) => g,
            _ => return Err(self.err("CP, Flag and Gr cannot appear in a quotient")),
        };
        let mut denominator = vec![self.group()?];
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            if !(self.eat("x") || self.eat("×") || self.eat("*")) {
                return Err(self.err("expected 'x' between denominator factors"));
            }
            denominator.push(self.group()?);
        }
        Ok(VolumeExpr::Coset {
            spec: CosetSpec::new(numerator, denominator)?,
        })
    }
}

/// Parses `SU(n)`, `U(n)`, `U1[SU(m)]`, `CP(n)`, `Flag(n)`, `Gr(n,m)`, or a
/// quotient `G/H1xH2x…` of the first three.
///
/// Syntax errors are [`Error::Parse`]; well-formed quotients that violate a
/// constraint fail with the constraint's own error.
pub fn parse_volume_expr(text: &str) -> Result<VolumeExpr> {
    Parser { src: text, pos: 0 }.expr()
}
