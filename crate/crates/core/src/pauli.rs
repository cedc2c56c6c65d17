//! Pauli configurations as binary pairs, syndromes and logical classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SurfaceCode;

/// Single-qubit Pauli as `(x, z)` bits: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' | 'i' | '_' | '.' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-qubit Pauli operator up to phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PauliConfig {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl PauliConfig {
    pub fn identity(n: usize) -> Self {
        PauliConfig {
            x: vec![false; n],
            z: vec![false; n],
        }
    }

    pub fn from_parts(x: Vec<bool>, z: Vec<bool>) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: z.len(),
            });
        }
        Ok(PauliConfig { x, z })
    }

    /// X errors on the listed qubits.
    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        let mut p = PauliConfig::identity(n);
        for &q in qubits {
            p.x[q] ^= true;
        }
        p
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        let mut p = PauliConfig::identity(n);
        for &q in qubits {
            p.z[q] ^= true;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x[q], self.z[q])
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x[q] = x;
        self.z[q] = z;
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&x, &z)| x || z).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Componentwise product (XOR of the binary parts).
    pub fn apply(&self, other: &PauliConfig) -> Result<PauliConfig> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        Ok(PauliConfig { x, z })
    }

    pub fn syndrome(&self, code: &SurfaceCode) -> Result<Syndrome> {
        syndrome(code, self)
    }
}

impl fmt::Display for PauliConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            write!(f, "{}", self.get(q).to_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut p = PauliConfig::default();
        for c in s.chars() {
            let pauli = Pauli::from_char(c)
                .ok_or_else(|| Error::Parse(format!("invalid Pauli character `{c}`")))?;
            let (x, z) = pauli.bits();
            p.x.push(x);
            p.z.push(z);
        }
        Ok(p)
    }
}

/// Outcomes of the Z-checks (sensitive to X parts) and X-checks (sensitive to
/// Z parts).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Syndrome {
    pub z_checks: Vec<bool>,
    pub x_checks: Vec<bool>,
}

impl Syndrome {
    pub fn zero(code: &SurfaceCode) -> Self {
        Syndrome {
            z_checks: vec![false; code.z_checks.len()],
            x_checks: vec![false; code.x_checks.len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.z_checks.iter().chain(&self.x_checks).any(|&b| b)
    }

    pub fn weight(&self) -> usize {
        self.z_checks
            .iter()
            .chain(&self.x_checks)
            .filter(|&&b| b)
            .count()
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        Syndrome {
            z_checks: self
                .z_checks
                .iter()
                .zip(&other.z_checks)
                .map(|(a, b)| a ^ b)
                .collect(),
            x_checks: self
                .x_checks
                .iter()
                .zip(&other.x_checks)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// `Z:<bits> X:<bits>` with bits as 0/1 characters.
    pub fn to_bit_string(&self) -> String {
        let bits = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        format!("Z:{} X:{}", bits(&self.z_checks), bits(&self.x_checks))
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        let mut z = None;
        let mut x = None;
        for tok in s.split_whitespace() {
            let parse = |b: &str| {
                b.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Parse(format!("invalid syndrome bit `{c}`"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            };
            if let Some(b) = tok.strip_prefix("Z:") {
                z = Some(parse(b)?);
            } else if let Some(b) = tok.strip_prefix("X:") {
                x = Some(parse(b)?);
            } else {
                return Err(Error::Parse(format!("unexpected syndrome token `{tok}`")));
            }
        }
        match (z, x) {
            (Some(z_checks), Some(x_checks)) => Ok(Syndrome { z_checks, x_checks }),
            _ => Err(Error::Parse(
                "syndrome needs both `Z:` and `X:` parts".into(),
            )),
        }
    }
}

pub fn syndrome(code: &SurfaceCode, e: &PauliConfig) -> Result<Syndrome> {
    if e.len() != code.n {
        return Err(Error::LengthMismatch {
            expected: code.n,
            got: e.len(),
        });
    }
    let parity =
        |support: &Vec<usize>, bits: &[bool]| support.iter().fold(false, |acc, &q| acc ^ bits[q]);
    Ok(Syndrome {
        z_checks: code.z_checks.iter().map(|s| parity(s, &e.x)).collect(),
        x_checks: code.x_checks.iter().map(|s| parity(s, &e.z)).collect(),
    })
}

/// Logical class of a syndrome-free residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResidualClass {
    Stabilizer,
    LogicalX,
    LogicalY,
    LogicalZ,
}

impl ResidualClass {
    pub fn is_logical_error(self) -> bool {
        self != ResidualClass::Stabilizer
    }
}

/// Classify `residual`, which must have trivial syndrome. Its X part is a
/// logical iff it anticommutes with the Z logical, and likewise for Z.
pub fn classify_residual(code: &SurfaceCode, residual: &PauliConfig) -> Result<ResidualClass> {
    let s = syndrome(code, residual)?;
    if !s.is_zero() {
        return Err(Error::Mismatch(
            "residual has a non-trivial syndrome".into(),
        ));
    }
    let flip_x = code
        .logical_z
        .iter()
        .fold(false, |acc, &q| acc ^ residual.x[q]);
    let flip_z = code
        .logical_x
        .iter()
        .fold(false, |acc, &q| acc ^ residual.z[q]);
    Ok(match (flip_x, flip_z) {
        (false, false) => ResidualClass::Stabilizer,
        (true, false) => ResidualClass::LogicalX,
        (true, true) => ResidualClass::LogicalY,
        (false, true) => ResidualClass::LogicalZ,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        let p: PauliConfig = "IXYZI".parse().unwrap();
        assert_eq!(p.to_string(), "IXYZI");
        assert_eq!(p.weight(), 3);
        assert!("IXQ".parse::<PauliConfig>().is_err());
    }

    #[test]
    fn length_mismatch() {
        let code = SurfaceCode::new(3).unwrap();
        let e = PauliConfig::identity(5);
        assert_eq!(
            syndrome(&code, &e),
            Err(Error::LengthMismatch {
                expected: 13,
                got: 5
            })
        );
    }

    #[test]
    fn single_x_on_bulk_horizontal_lights_two_z_checks() {
        let code = SurfaceCode::new(3).unwrap();
        // h(1,1) sits between Z(1,0) and Z(1,1)
        let e = PauliConfig::x_on(code.n, &[4]);
        let s = syndrome(&code, &e).unwrap();
        assert_eq!(s.z_checks.iter().filter(|&&b| b).count(), 2);
        assert!(s.z_checks[2] && s.z_checks[3]);
        assert!(s.x_checks.iter().all(|&b| !b));
    }

    #[test]
    fn logicals_classify() {
        let code = SurfaceCode::new(5).unwrap();
        let lx = PauliConfig::x_on(code.n, &code.logical_x);
        let lz = PauliConfig::z_on(code.n, &code.logical_z);
        assert_eq!(
            classify_residual(&code, &lx).unwrap(),
            ResidualClass::LogicalX
        );
        assert_eq!(
            classify_residual(&code, &lz).unwrap(),
            ResidualClass::LogicalZ
        );
        let y = lx.apply(&lz).unwrap();
        assert_eq!(
            classify_residual(&code, &y).unwrap(),
            ResidualClass::LogicalY
        );
        let stab = PauliConfig::x_on(code.n, &code.x_checks[3]);
        assert_eq!(
            classify_residual(&code, &stab).unwrap(),
            ResidualClass::Stabilizer
        );
        let stab = PauliConfig::z_on(code.n, &code.z_checks[7]);
        assert_eq!(
            classify_residual(&code, &stab).unwrap(),
            ResidualClass::Stabilizer
        );
        let bad = PauliConfig::x_on(code.n, &[0]);
        assert!(classify_residual(&code, &bad).is_err());
    }

    #[test]
    fn syndrome_string_round_trip() {
        let code = SurfaceCode::new(3).unwrap();
        let e: PauliConfig = "XIYIZIIIIXIIZ".parse().unwrap();
        let s = syndrome(&code, &e).unwrap();
        assert_eq!(Syndrome::from_bit_string(&s.to_bit_string()).unwrap(), s);
    }
}
