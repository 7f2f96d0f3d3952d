use crate::error::{Error, Result};
use crate::prob::channel::Channel;
use crate::prob::pmf::{entropy_of, Pmf};
use crate::tol::{TOL_NUM, TOL_PMF};

/// A joint pmf of the pair `(X, Y)` as an `|X| x |Y|` table, row-major in
/// `X`. Entries are non-negative and sum to 1 within the validation
/// tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPmf {
    table: Vec<Vec<f64>>,
    x_labels: Option<Vec<String>>,
    y_labels: Option<Vec<String>>,
}

/// Which variable to condition on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl JointPmf {
    pub fn validate(table: Vec<Vec<f64>>) -> Result<JointPmf> {
        if table.is_empty() || table[0].is_empty() {
            return Err(Error::EmptyInput);
        }
        let ny = table[0].len();
        let mut total = 0.0;
        for row in &table {
            if row.len() != ny {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: ny,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v <= -TOL_PMF {
                    return Err(Error::NegativeEntry { index: j, value: v });
                }
                total += v;
            }
        }
        if (total - 1.0).abs() > TOL_PMF {
            return Err(Error::SumNotOne { sum: total });
        }
        let mut cleaned: Vec<Vec<f64>> = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| if v < TOL_PMF { 0.0 } else { v })
                    .collect()
            })
            .collect();
        let cleaned_total: f64 = cleaned.iter().flatten().sum();
        // renormalize only when meaningfully off so validation is idempotent
        if (cleaned_total - 1.0).abs() > 1e-12 {
            for row in &mut cleaned {
                for v in row.iter_mut() {
                    *v /= cleaned_total;
                }
            }
        }
        Ok(JointPmf {
            table: cleaned,
            x_labels: None,
            y_labels: None,
        })
    }

    pub fn with_labels(
        mut self,
        x_labels: Option<Vec<String>>,
        y_labels: Option<Vec<String>>,
    ) -> JointPmf {
        self.x_labels = x_labels;
        self.y_labels = y_labels;
        self
    }

    pub fn nx(&self) -> usize {
        self.table.len()
    }

    pub fn ny(&self) -> usize {
        self.table[0].len()
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn x_labels(&self) -> Option<&[String]> {
        self.x_labels.as_deref()
    }

    pub fn y_labels(&self) -> Option<&[String]> {
        self.y_labels.as_deref()
    }

    pub fn marginal_x(&self) -> Pmf {
        let probs: Vec<f64> = self.table.iter().map(|row| row.iter().sum()).collect();
        Pmf::validate(&probs).expect("row sums of a valid joint form a pmf")
    }

    pub fn marginal_y(&self) -> Pmf {
        let probs: Vec<f64> = (0..self.ny())
            .map(|j| self.table.iter().map(|row| row[j]).sum())
            .collect();
        Pmf::validate(&probs).expect("column sums of a valid joint form a pmf")
    }

    /// `p(Y|X)` together with the indices of zero-probability conditioning
    /// rows, which are emitted uniform so downstream code can skip them.
    pub fn condition_on_x(&self) -> (Channel, Vec<usize>) {
        let px = self.marginal_x();
        let mut rows = Vec::with_capacity(self.nx());
        let mut flagged = Vec::new();
        for x in 0..self.nx() {
            if px.get(x) > 0.0 {
                let row: Vec<f64> = self.table[x].iter().map(|&v| v / px.get(x)).collect();
                rows.push(Pmf::validate(&row).expect("conditional row is a pmf"));
            } else {
                flagged.push(x);
                rows.push(Pmf::uniform(self.ny()));
            }
        }
        (
            Channel::from_pmf_rows(rows).expect("at least one row"),
            flagged,
        )
    }

    /// `p(X|Y)` with rows indexed by `y`; zero-probability rows flagged.
    pub fn condition_on_y(&self) -> (Channel, Vec<usize>) {
        self.transpose().condition_on_x()
    }

    pub fn transpose(&self) -> JointPmf {
        let table: Vec<Vec<f64>> = (0..self.ny())
            .map(|j| self.table.iter().map(|row| row[j]).collect())
            .collect();
        JointPmf {
            table,
            x_labels: self.y_labels.clone(),
            y_labels: self.x_labels.clone(),
        }
    }

    /// Joint entropy `H(X, Y)` in bits.
    pub fn entropy(&self) -> f64 {
        let flat: Vec<f64> = self.table.iter().flatten().copied().collect();
        entropy_of(&flat)
    }

    /// `I(X;Y) = H(X) + H(Y) - H(X,Y)` in bits, clamped at zero.
    pub fn mutual_information(&self) -> f64 {
        let i = entropy_of(self.marginal_x().probs()) + entropy_of(self.marginal_y().probs())
            - self.entropy();
        if i < 0.0 {
            debug_assert!(i > -TOL_NUM, "mutual information {i} below -tolerance");
            0.0
        } else {
            i
        }
    }

    /// Index pairs with mass above the validation tolerance.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for x in 0..self.nx() {
            for y in 0..self.ny() {
                if self.table[x][y] > TOL_PMF {
                    pairs.push((x, y));
                }
            }
        }
        pairs
    }
}

/// Builds the joint `p(x, y) = p_x(x) * ch(y|x)`.
pub fn joint_from(p_x: &Pmf, ch: &Channel) -> Result<JointPmf> {
    if ch.n_inputs() != p_x.dim() {
        return Err(Error::DimensionMismatch {
            left: ch.n_inputs(),
            right: p_x.dim(),
        });
    }
    let table: Vec<Vec<f64>> = (0..p_x.dim())
        .map(|x| {
            ch.row(x)
                .probs()
                .iter()
                .map(|&c| p_x.get(x) * c)
                .collect()
        })
        .collect();
    JointPmf::validate(table)
}

pub fn marginals(j: &JointPmf) -> (Pmf, Pmf) {
    (j.marginal_x(), j.marginal_y())
}

pub fn condition(j: &JointPmf, given: Axis) -> (Channel, Vec<usize>) {
    match given {
        Axis::X => j.condition_on_x(),
        Axis::Y => j.condition_on_y(),
    }
}

pub fn mutual_information(j: &JointPmf) -> f64 {
    j.mutual_information()
}

pub fn support(j: &JointPmf) -> Vec<(usize, usize)> {
    j.support()
}
