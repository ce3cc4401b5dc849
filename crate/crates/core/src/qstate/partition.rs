use serde::{Deserialize, Serialize};

use super::layout::check_indices;
use crate::error::{ensure, Error, Result};

/// Named subsystem of a [`Partition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    A,
    B,
    C,
    RA,
    RB,
    C0,
    C1,
}

/// Split of `n` qubits into disjoint ordered blocks A, B, C, with optional
/// pair registers `R_A ⊆ A`, `R_B ⊆ B` and a split `C = C0 ∪ C1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
    c: Vec<usize>,
    r_a: Option<Vec<usize>>,
    r_b: Option<Vec<usize>>,
    c0: Option<Vec<usize>>,
    c1: Option<Vec<usize>>,
}

impl Partition {
    /// A, B, C must be disjoint and cover `0..n`.
    pub fn new(n: usize, a: Vec<usize>, b: Vec<usize>, c: Vec<usize>) -> Result<Self> {
        let all: Vec<usize> = a.iter().chain(&b).chain(&c).copied().collect();
        check_indices(&all, n)?;
        ensure!(
            all.len() == n,
            Indices,
            "blocks cover {} of {n} qubits",
            all.len()
        );
        Ok(Partition { n, a, b, c, r_a: None, r_b: None, c0: None, c1: None })
    }

    /// Contiguous layout: A = `0..n_a`, B next, C last.
    pub fn tripartite(n_a: usize, n_b: usize, n_c: usize) -> Self {
        let a = (0..n_a).collect();
        let b = (n_a..n_a + n_b).collect();
        let c = (n_a + n_b..n_a + n_b + n_c).collect();
        Partition::new(n_a + n_b + n_c, a, b, c).expect("contiguous blocks are valid")
    }

    /// Registers the EPR pair registers; `r_a[i]` pairs with `r_b[i]`.
    pub fn with_pairs(mut self, r_a: Vec<usize>, r_b: Vec<usize>) -> Result<Self> {
        ensure!(
            r_a.len() == r_b.len(),
            InvalidArgument,
            "|R_A| = {} differs from |R_B| = {}",
            r_a.len(),
            r_b.len()
        );
        ensure!(r_a.iter().all(|q| self.a.contains(q)), Indices, "R_A is not inside A");
        ensure!(r_b.iter().all(|q| self.b.contains(q)), Indices, "R_B is not inside B");
        check_indices(&r_a, self.n)?;
        check_indices(&r_b, self.n)?;
        self.r_a = Some(r_a);
        self.r_b = Some(r_b);
        Ok(self)
    }

    /// Uses the first `m` qubits of A and of B as pair registers.
    pub fn with_leading_pairs(self, m: usize) -> Result<Self> {
        ensure!(
            m <= self.a.len() && m <= self.b.len(),
            InvalidArgument,
            "m = {m} exceeds |A| = {} or |B| = {}",
            self.a.len(),
            self.b.len()
        );
        let r_a = self.a[..m].to_vec();
        let r_b = self.b[..m].to_vec();
        self.with_pairs(r_a, r_b)
    }

    /// Splits C into `C0` (the given qubits) and `C1` (the remaining ones).
    pub fn with_c_split(mut self, c0: Vec<usize>) -> Result<Self> {
        ensure!(c0.iter().all(|q| self.c.contains(q)), Indices, "C0 is not inside C");
        check_indices(&c0, self.n)?;
        let c1 = self.c.iter().copied().filter(|q| !c0.contains(q)).collect();
        self.c0 = Some(c0);
        self.c1 = Some(c1);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn a(&self) -> &[usize] {
        &self.a
    }
    pub fn b(&self) -> &[usize] {
        &self.b
    }
    pub fn c(&self) -> &[usize] {
        &self.c
    }

    /// Qubits of A followed by qubits of B.
    pub fn ab(&self) -> Vec<usize> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    pub fn block(&self, block: Block) -> Option<&[usize]> {
        match block {
            Block::A => Some(&self.a),
            Block::B => Some(&self.b),
            Block::C => Some(&self.c),
            Block::RA => self.r_a.as_deref(),
            Block::RB => self.r_b.as_deref(),
            Block::C0 => self.c0.as_deref(),
            Block::C1 => self.c1.as_deref(),
        }
    }

    /// Pair registers, checked to hold exactly `m` qubits each.
    pub fn pairs(&self, m: usize) -> Result<(&[usize], &[usize])> {
        let (r_a, r_b) = match (&self.r_a, &self.r_b) {
            (Some(r_a), Some(r_b)) => (r_a, r_b),
            _ => return Err(Error::InvalidArgument("partition has no R_A/R_B".into())),
        };
        ensure!(
            r_a.len() == m,
            InvalidArgument,
            "partition registers {} pairs, expected {m}",
            r_a.len()
        );
        Ok((r_a, r_b))
    }

    pub fn n_a(&self) -> usize {
        self.a.len()
    }
    pub fn n_b(&self) -> usize {
        self.b.len()
    }
    pub fn n_c(&self) -> usize {
        self.c.len()
    }
    pub fn d(&self) -> usize {
        1 << self.n
    }
    pub fn d_a(&self) -> usize {
        1 << self.a.len()
    }
    pub fn d_b(&self) -> usize {
        1 << self.b.len()
    }
    pub fn d_c(&self) -> usize {
        1 << self.c.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_must_cover_and_be_disjoint() {
        assert!(Partition::new(3, vec![0], vec![1], vec![]).is_err());
        assert!(Partition::new(3, vec![0, 1], vec![1], vec![2]).is_err());
        assert!(Partition::new(3, vec![2], vec![0], vec![1]).is_ok());
    }

    #[test]
    fn pair_registers_are_checked() {
        let p = Partition::tripartite(2, 2, 1);
        assert!(p.clone().with_pairs(vec![0], vec![0]).is_err());
        assert!(p.clone().with_pairs(vec![0], vec![2, 3]).is_err());
        let p = p.with_leading_pairs(1).unwrap();
        assert_eq!(p.pairs(1).unwrap(), (&[0][..], &[2][..]));
        assert!(p.pairs(2).is_err());
    }

    #[test]
    fn c_split() {
        let p = Partition::tripartite(1, 1, 3).with_c_split(vec![3]).unwrap();
        assert_eq!(p.block(Block::C0).unwrap(), &[3]);
        assert_eq!(p.block(Block::C1).unwrap(), &[2, 4]);
    }
}
