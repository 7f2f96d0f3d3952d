use crate::error::{Error, Result};
use crate::prob::pmf::Pmf;

/// A conditional pmf as a row-stochastic table: row `i` is the output
/// distribution given input symbol `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    rows: Vec<Pmf>,
    input_labels: Option<Vec<String>>,
    output_labels: Option<Vec<String>>,
}

impl Channel {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Channel> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let width = rows[0].len();
        let mut validated = Vec::with_capacity(rows.len());
        for row in &rows {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: width,
                });
            }
            validated.push(Pmf::validate(row)?);
        }
        Ok(Channel {
            rows: validated,
            input_labels: None,
            output_labels: None,
        })
    }

    pub fn from_pmf_rows(rows: Vec<Pmf>) -> Result<Channel> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let width = rows[0].dim();
        if rows.iter().any(|r| r.dim() != width) {
            return Err(Error::DimensionMismatch {
                left: rows.iter().map(|r| r.dim()).max().unwrap(),
                right: width,
            });
        }
        Ok(Channel {
            rows,
            input_labels: None,
            output_labels: None,
        })
    }

    pub fn identity(n: usize) -> Channel {
        let rows = (0..n).map(|i| Pmf::point_mass(n, i)).collect();
        Channel {
            rows,
            input_labels: None,
            output_labels: None,
        }
    }

    /// Channel whose every row equals `row` (output independent of input).
    pub fn constant(n_inputs: usize, row: Pmf) -> Channel {
        Channel {
            rows: vec![row; n_inputs],
            input_labels: None,
            output_labels: None,
        }
    }

    /// Deterministic channel realizing `map[i]` on input `i`.
    pub fn deterministic(n_outputs: usize, map: &[usize]) -> Channel {
        let rows = map.iter().map(|&j| Pmf::point_mass(n_outputs, j)).collect();
        Channel {
            rows,
            input_labels: None,
            output_labels: None,
        }
    }

    pub fn with_labels(
        mut self,
        input: Option<Vec<String>>,
        output: Option<Vec<String>>,
    ) -> Channel {
        self.input_labels = input;
        self.output_labels = output;
        self
    }

    pub fn n_inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn row(&self, i: usize) -> &Pmf {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Pmf] {
        &self.rows
    }

    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.rows[input].get(output)
    }

    pub fn input_labels(&self) -> Option<&[String]> {
        self.input_labels.as_deref()
    }

    pub fn output_labels(&self) -> Option<&[String]> {
        self.output_labels.as_deref()
    }

    /// Row-stochastic matrix product: `self` (A -> B) then `other` (B -> C).
    pub fn then(&self, other: &Channel) -> Result<Channel> {
        if self.n_outputs() != other.n_inputs() {
            return Err(Error::DimensionMismatch {
                left: self.n_outputs(),
                right: other.n_inputs(),
            });
        }
        let mut rows = Vec::with_capacity(self.n_inputs());
        for a in 0..self.n_inputs() {
            let mut row = vec![0.0; other.n_outputs()];
            for b in 0..self.n_outputs() {
                let w = self.prob(a, b);
                if w > 0.0 {
                    for (c, r) in row.iter_mut().enumerate() {
                        *r += w * other.prob(b, c);
                    }
                }
            }
            rows.push(row);
        }
        Channel::from_rows(rows)
    }
}

/// Numerical rank of the channel's row matrix via Gaussian elimination
/// with partial pivoting; pivots below `tol` times the largest pivot
/// count as zero.
pub fn numerical_rank(ch: &Channel, tol: f64) -> usize {
    let m = ch.n_inputs();
    let n = ch.n_outputs();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|i| ch.row(i).probs().to_vec())
        .collect();
    let mut rank = 0;
    let mut first_pivot = 0.0_f64;
    let mut col = 0;
    while rank < m && col < n {
        let (best_row, best_val) = (rank..m)
            .map(|r| (r, a[r][col].abs()))
            .fold((rank, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if first_pivot == 0.0 {
            first_pivot = best_val;
        }
        if best_val <= tol * first_pivot.max(1.0) {
            col += 1;
            continue;
        }
        a.swap(rank, best_row);
        for r in (rank + 1)..m {
            let factor = a[r][col] / a[rank][col];
            if factor != 0.0 {
                for c in col..n {
                    a[r][c] -= factor * a[rank][c];
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank.max(1)
}
