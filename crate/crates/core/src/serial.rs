//! Plain-data forms of states and tableaus for the record files.
//!
//! A state is its amplitude list as `[re, im]` pairs in basis order. A tableau
//! is one generator per line written `x|z|s`, where `x` and `z` are bit
//! strings whose character `j` is qubit `j` and `s` is the sign bit.

use nalgebra::DVector;

use crate::error::{ensure, Error, Result};
use crate::qstate::PureState;
use crate::stabilizer::{PauliString, Tableau, MAX_TABLEAU_QUBITS};
use crate::C64;

/// Norm slack accepted when reading amplitudes back.
pub const STATE_NORM_TOLERANCE: f64 = 1e-10;

pub fn state_to_pairs(state: &PureState) -> Vec<[f64; 2]> {
    state.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

pub fn state_from_pairs(pairs: &[[f64; 2]]) -> Result<PureState> {
    let len = pairs.len();
    ensure!(len.is_power_of_two(), Parse, "{len} amplitudes is not a power of two");
    ensure!(
        pairs.iter().flatten().all(|v| v.is_finite()),
        Parse,
        "non-finite amplitude"
    );
    let n = len.trailing_zeros() as usize;
    let amps = DVector::from_iterator(len, pairs.iter().map(|&[re, im]| C64::new(re, im)));
    PureState::with_tolerance(n, amps, STATE_NORM_TOLERANCE).map_err(|e| match e {
        Error::Numerical(msg) => Error::Parse(msg),
        other => other,
    })
}

fn bit_string(v: u64, n: usize) -> String {
    (0..n).map(|j| if v >> j & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn format_tableau(tableau: &Tableau) -> String {
    let n = tableau.n();
    let mut out = String::new();
    for g in tableau.generators() {
        out.push_str(&format!("{}|{}|{}\n", bit_string(g.x, n), bit_string(g.z, n), u8::from(g.sign)));
    }
    out
}

fn parse_bits(field: &str, line: usize) -> Result<(u64, usize)> {
    ensure!(field.len() <= MAX_TABLEAU_QUBITS, Parse, "line {line}: more than {MAX_TABLEAU_QUBITS} qubits");
    let mut v = 0u64;
    for (j, c) in field.chars().enumerate() {
        match c {
            '0' => {}
            '1' => v |= 1 << j,
            _ => return Err(Error::Parse(format!("line {line}: unexpected {c:?} in bit string"))),
        }
    }
    Ok((v, field.len()))
}

/// Reads the `x|z|s` text form; blank lines and `#` comments are skipped.
pub fn parse_tableau(text: &str) -> Result<Tableau> {
    let mut n = None;
    let mut generators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        ensure!(fields.len() == 3, Parse, "line {}: expected x|z|s", i + 1);
        let (x, nx) = parse_bits(fields[0], i + 1)?;
        let (z, nz) = parse_bits(fields[1], i + 1)?;
        ensure!(nx == nz, Parse, "line {}: x and z widths differ", i + 1);
        ensure!(*n.get_or_insert(nx) == nx, Parse, "line {}: width {nx} differs from earlier rows", i + 1);
        let sign = match fields[2] {
            "0" => false,
            "1" => true,
            s => return Err(Error::Parse(format!("line {}: bad sign {s:?}", i + 1))),
        };
        generators.push(PauliString { x, z, sign });
    }
    Tableau::new(n.unwrap_or(0), generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_state, SeedSpec};
    use crate::stabilizer::random_stabilizer_state;

    #[test]
    fn states_round_trip_exactly() {
        let s = haar_state(4, SeedSpec::new(5, 1)).unwrap();
        let back = state_from_pairs(&state_to_pairs(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bad_states_are_parse_errors() {
        assert!(matches!(state_from_pairs(&[]), Err(Error::Parse(_))));
        assert!(matches!(state_from_pairs(&[[1.0, 0.0]; 3]), Err(Error::Parse(_))));
        assert!(matches!(state_from_pairs(&[[1.0, 0.0], [1.0, 0.0]]), Err(Error::Parse(_))));
        assert!(matches!(state_from_pairs(&[[f64::NAN, 0.0], [1.0, 0.0]]), Err(Error::Parse(_))));
        assert_eq!(state_from_pairs(&[[1.0, 0.0]]).unwrap().n(), 0);
    }

    #[test]
    fn tableaus_round_trip() {
        for seed in 0..20 {
            let t = random_stabilizer_state(1 + seed as usize % 7, SeedSpec::new(seed, 0)).unwrap();
            assert_eq!(parse_tableau(&format_tableau(&t)).unwrap(), t);
        }
    }

    #[test]
    fn bell_pair_text() {
        let t = parse_tableau("# bell\n11|00|0\n00|11|0\n").unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(format_tableau(&t), "11|00|0\n00|11|0\n");
    }

    #[test]
    fn malformed_tableaus() {
        assert!(matches!(parse_tableau("10|0|0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_tableau("1x|00|0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_tableau("10|00|2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_tableau("10|00\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_tableau("10|00|0\n1|0|0\n"), Err(Error::Parse(_))));
        assert!(parse_tableau("1|0|0\n0|1|0\n").is_err());
        assert!(parse_tableau("10|00|0\n").is_err());
    }
}
