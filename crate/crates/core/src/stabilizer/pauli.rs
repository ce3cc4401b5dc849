use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hermitian Pauli operator `(−1)^sign · i^{|x∧z|} · X^x Z^z` on up to 32
/// qubits; bit `j` of `x` and `z` refers to qubit `j`, and `x_j = z_j = 1`
/// is `Y_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    pub sign: bool,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString { x: 0, z: 0, sign: false }
    }

    pub fn single_x(q: usize) -> Self {
        PauliString { x: 1 << q, z: 0, sign: false }
    }

    pub fn single_z(q: usize) -> Self {
        PauliString { x: 0, z: 1 << q, sign: false }
    }

    /// Qubits on which the operator is not the identity.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `self · other`; both must commute so that the product is Hermitian.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // exponent of i relative to the canonical form of the product
        let e = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            + 2 * (self.sign as i64 + other.sign as i64)
            - (x & z).count_ones() as i64;
        let e = e.rem_euclid(4);
        if e % 2 == 1 {
            return Err(Error::InvalidArgument("product of anticommuting Paulis".into()));
        }
        Ok(PauliString { x, z, sign: e == 2 })
    }

    /// Label with character `j` describing qubit `j`, prefixed by its sign.
    pub fn label(&self, n: usize) -> String {
        let mut s = String::with_capacity(n + 1);
        s.push(if self.sign { '-' } else { '+' });
        for q in 0..n {
            s.push(match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            });
        }
        s
    }

    /// Inverse of [`PauliString::label`]; the sign prefix is optional.
    pub fn from_label(label: &str) -> Result<(PauliString, usize)> {
        let (sign, body) = match label.as_bytes().first() {
            Some(b'-') => (true, &label[1..]),
            Some(b'+') => (false, &label[1..]),
            _ => (false, label),
        };
        if body.len() > 32 {
            return Err(Error::Parse(format!("{} qubits exceed the limit of 32", body.len())));
        }
        let mut p = PauliString { x: 0, z: 0, sign };
        for (q, ch) in body.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => p.x |= 1 << q,
                'Z' => p.z |= 1 << q,
                'Y' => {
                    p.x |= 1 << q;
                    p.z |= 1 << q;
                }
                other => return Err(Error::Parse(format!("'{other}' is not a Pauli letter"))),
            }
        }
        Ok((p, body.chars().count()))
    }

    /// `P|b⟩ = phase · |b ⊕ x⟩`.
    pub fn act(&self, b: usize) -> (usize, crate::C64) {
        let b64 = b as u64;
        let mut k = (self.x & self.z).count_ones() + 2 * (self.z & b64).count_ones() + 2 * self.sign as u32;
        k %= 4;
        let phase = match k {
            0 => crate::C64::new(1.0, 0.0),
            1 => crate::C64::new(0.0, 1.0),
            2 => crate::C64::new(-1.0, 0.0),
            _ => crate::C64::new(0.0, -1.0),
        };
        ((b64 ^ self.x) as usize, phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_track_signs() {
        let (xx, _) = PauliString::from_label("XX").unwrap();
        let (zz, _) = PauliString::from_label("ZZ").unwrap();
        // XX · ZZ = (XZ)(XZ) = (−iY)(−iY) = −YY
        let p = xx.mul(&zz).unwrap();
        assert_eq!(p.label(2), "-YY");
        let (x, _) = PauliString::from_label("XI").unwrap();
        assert!(x.mul(&zz).is_err());
    }

    #[test]
    fn action_on_basis_states() {
        let (y, _) = PauliString::from_label("Y").unwrap();
        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
        assert_eq!(y.act(0), (1, crate::C64::new(0.0, 1.0)));
        assert_eq!(y.act(1), (0, crate::C64::new(0.0, -1.0)));
    }

    #[test]
    fn label_roundtrip() {
        let (p, n) = PauliString::from_label("-XYZI").unwrap();
        assert_eq!(n, 4);
        assert_eq!(p.label(4), "-XYZI");
        assert!(PauliString::from_label("XQ").is_err());
    }
}
