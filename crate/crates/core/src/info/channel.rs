use crate::error::{Error, Result};
use crate::info::distribution::{Distribution, MASS_TOLERANCE};

/// A row-stochastic matrix `W(b|a)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::invalid("kernel must have at least one row and column"));
        }
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::invalid(format!(
                    "kernel row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            let row = Distribution::new(row).map_err(|e| Error::invalid(format!("kernel row {r}: {e}")))?;
            data.extend_from_slice(row.probs());
        }
        Ok(Kernel {
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("crossover probability {p} outside [0, 1]")));
        }
        Kernel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    pub fn identity(size: usize) -> Result<Self> {
        Kernel::new(
            (0..size)
                .map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.data[input * self.cols + output]
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.data[input * self.cols..(input + 1) * self.cols]
    }

    /// Matrix product `self · other`, i.e. the cascade of the two channels.
    pub fn compose(&self, other: &Kernel) -> Result<Kernel> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let rows = (0..self.rows)
            .map(|a| {
                (0..other.cols)
                    .map(|c| (0..self.cols).map(|b| self.get(a, b) * other.get(b, c)).sum())
                    .collect()
            })
            .collect();
        Kernel::new(rows)
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Kernel) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Discrete memoryless wiretap channel `W_{YZ|X}`.
///
/// Row `x` of the kernel is the joint law of `(y, z)` given `x`, laid out
/// y-major, z-minor: entry `y * nz + z`.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapChannel {
    nx: usize,
    ny: usize,
    nz: usize,
    kernel: Vec<f64>,
    main: Kernel,
    eve: Kernel,
}

impl WiretapChannel {
    pub fn new(nx: usize, ny: usize, nz: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(Error::invalid("channel alphabets must be non-empty"));
        }
        if rows.len() != nx {
            return Err(Error::invalid(format!(
                "kernel has {} rows, expected nx = {nx}",
                rows.len()
            )));
        }
        let width = ny * nz;
        let mut kernel = Vec::with_capacity(nx * width);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::invalid(format!(
                    "kernel row {x} has {} entries, expected ny*nz = {width}",
                    row.len()
                )));
            }
            let row = Distribution::new(row).map_err(|e| Error::invalid(format!("kernel row {x}: {e}")))?;
            kernel.extend_from_slice(row.probs());
        }
        let marginal = |x: usize, keep_y: bool| -> Vec<f64> {
            let row = &kernel[x * width..(x + 1) * width];
            if keep_y {
                (0..ny).map(|y| row[y * nz..(y + 1) * nz].iter().sum()).collect()
            } else {
                (0..nz).map(|z| (0..ny).map(|y| row[y * nz + z]).sum()).collect()
            }
        };
        let main = Kernel::new((0..nx).map(|x| marginal(x, true)).collect())?;
        let eve = Kernel::new((0..nx).map(|x| marginal(x, false)).collect())?;
        Ok(WiretapChannel {
            nx,
            ny,
            nz,
            kernel,
            main,
            eve,
        })
    }

    /// Builds the channel whose outputs are conditionally independent given
    /// the input. Secrecy quantities depend only on the two marginals.
    pub fn from_marginals(main: &Kernel, eve: &Kernel) -> Result<Self> {
        if main.rows() != eve.rows() {
            return Err(Error::LengthMismatch {
                expected: main.rows(),
                actual: eve.rows(),
            });
        }
        let rows = (0..main.rows())
            .map(|x| {
                let mut row = Vec::with_capacity(main.cols() * eve.cols());
                for y in 0..main.cols() {
                    for z in 0..eve.cols() {
                        row.push(main.get(x, y) * eve.get(x, z));
                    }
                }
                row
            })
            .collect();
        WiretapChannel::new(main.rows(), main.cols(), eve.cols(), rows)
    }

    /// Main BSC(`p_main`) and eavesdropper BSC(`p_eve`).
    pub fn binary_symmetric_pair(p_main: f64, p_eve: f64) -> Result<Self> {
        Self::from_marginals(&Kernel::bsc(p_main)?, &Kernel::bsc(p_eve)?)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    /// `W_{YZ|X=x}` as a y-major row.
    pub fn joint_row(&self, x: usize) -> &[f64] {
        let w = self.ny * self.nz;
        &self.kernel[x * w..(x + 1) * w]
    }

    /// Main channel `W_{Y|X}`.
    pub fn main(&self) -> &Kernel {
        &self.main
    }

    /// Eavesdropper's channel `W_{Z|X}`.
    pub fn eve(&self) -> &Kernel {
        &self.eve
    }
}

/// Joint law of two variables `(A, B)`, stored row-major over `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    table: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: table.len(),
            });
        }
        let total: f64 = table.iter().sum();
        if table.iter().any(|p| !p.is_finite() || *p < 0.0) || (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid("joint table is not a probability distribution"));
        }
        Ok(JointDistribution { rows, cols, table })
    }

    /// `p(a, b) = p(a) W(b|a)`.
    pub fn from_input_and_kernel(input: &Distribution, kernel: &Kernel) -> Result<Self> {
        if input.len() != kernel.rows() {
            return Err(Error::LengthMismatch {
                expected: kernel.rows(),
                actual: input.len(),
            });
        }
        let mut table = Vec::with_capacity(kernel.rows() * kernel.cols());
        for (a, &pa) in input.probs().iter().enumerate() {
            table.extend(kernel.row(a).iter().map(|w| pa * w));
        }
        Ok(JointDistribution {
            rows: kernel.rows(),
            cols: kernel.cols(),
            table,
        })
    }

    /// Independent coupling `p(a) q(b)`.
    pub fn product(a: &Distribution, b: &Distribution) -> Self {
        let table = a
            .probs()
            .iter()
            .flat_map(|pa| b.probs().iter().map(move |pb| pa * pb))
            .collect();
        JointDistribution {
            rows: a.len(),
            cols: b.len(),
            table,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.table[a * self.cols + b]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn marginal_a(&self) -> Vec<f64> {
        self.table.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_b(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|b| (0..self.rows).map(|a| self.get(a, b)).sum())
            .collect()
    }
}
