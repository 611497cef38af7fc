//! Smith normal form over ℤ with optional bookkeeping of the unimodular
//! transforms, `U·A·V = diag(s_1, …, s_r, 0, …)` with `s_i | s_{i+1}`.

use crate::error::{Error, Result};
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] += v;
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let prod = a.checked_mul(b).ok_or(Error::Overflow("matrix product"))?;
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].checked_add(prod).ok_or(Error::Overflow("matrix product"))?;
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k·row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let idx = dst * self.cols + j;
                let v = s.checked_mul(k).and_then(|p| self.data[idx].checked_add(p));
                self.data[idx] = v.ok_or(Error::Overflow("smith normal form"))?;
            }
        }
        Ok(())
    }

    /// `col[dst] += k·col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let idx = i * self.cols + dst;
                let v = s.checked_mul(k).and_then(|p| self.data[idx].checked_add(p));
                self.data[idx] = v.ok_or(Error::Overflow("smith normal form"))?;
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum RowOp {
    Swap(usize, usize),
    AddMul { dst: usize, src: usize, k: i128 },
    Negate(usize),
}

/// Which transforms to keep while reducing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub row_log: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero invariant factors, positive, each dividing the next.
    pub diag: Vec<i128>,
    log: Vec<RowOp>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Applies `U` to a vector of phases (entries of `b` taken mod 1).
    pub fn apply_u_phases(&self, b: &mut [Phase]) {
        assert_eq!(b.len(), self.rows, "vector length must match row count");
        for op in &self.log {
            match *op {
                RowOp::Swap(i, j) => b.swap(i, j),
                RowOp::AddMul { dst, src, k } => {
                    let add = b[src].scale((k % b[src].denom() as i128) as i64);
                    b[dst] += add;
                }
                RowOp::Negate(i) => b[i] = -b[i],
            }
        }
    }
}

struct Reducer {
    a: IntMatrix,
    track: Track,
    log: Vec<RowOp>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reducer {
    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if self.track.row_log {
            self.log.push(RowOp::Swap(i, j));
        }
        if let Some(m) = self.u_inv.as_mut() {
            m.swap_cols(i, j);
        }
    }

    fn row_add(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        self.a.add_row(dst, src, k)?;
        if self.track.row_log {
            self.log.push(RowOp::AddMul { dst, src, k });
        }
        if let Some(m) = self.u_inv.as_mut() {
            m.add_col(src, dst, -k)?;
        }
        Ok(())
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        if self.track.row_log {
            self.log.push(RowOp::Negate(i));
        }
        if let Some(m) = self.u_inv.as_mut() {
            m.negate_col(i);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(m) = self.v.as_mut() {
            m.swap_cols(i, j);
        }
        if let Some(m) = self.v_inv.as_mut() {
            m.swap_rows(i, j);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        self.a.add_col(dst, src, k)?;
        if let Some(m) = self.v.as_mut() {
            m.add_col(dst, src, k)?;
        }
        if let Some(m) = self.v_inv.as_mut() {
            m.add_row(src, dst, -k)?;
        }
        Ok(())
    }

    /// Smallest nonzero |entry| in the trailing submatrix starting at `t`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = self.a.get(i, j).abs();
                if v != 0 && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                    if v == 1 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (self.a.get(t, t).abs(), t, t);
        for i in t + 1..self.a.rows {
            let v = self.a.get(i, t).abs();
            if v != 0 && (best.0 == 0 || v < best.0) {
                best = (v, i, t);
            }
        }
        for j in t + 1..self.a.cols {
            let v = self.a.get(t, j).abs();
            if v != 0 && (best.0 == 0 || v < best.0) {
                best = (v, t, j);
            }
        }
        (best.1, best.2)
    }

    fn run(mut self) -> Result<SmithForm> {
        let (rows, cols) = (self.a.rows, self.a.cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let p = self.a.get(t, t);
                let mut clean = true;
                for i in t + 1..rows {
                    let x = self.a.get(i, t);
                    if x != 0 {
                        self.row_add(i, t, -(x / p))?;
                        if self.a.get(i, t) != 0 {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..cols {
                    let x = self.a.get(t, j);
                    if x != 0 {
                        self.col_add(j, t, -(x / p))?;
                        if self.a.get(t, j) != 0 {
                            clean = false;
                        }
                    }
                }
                if clean && p.abs() != 1 {
                    'find: for i in t + 1..rows {
                        for j in t + 1..cols {
                            if self.a.get(i, j) % p != 0 {
                                self.row_add(t, i, 1)?;
                                clean = false;
                                break 'find;
                            }
                        }
                    }
                }
                if clean {
                    break;
                }
                let (i, j) = self.min_in_cross(t);
                self.row_swap(t, i);
                self.col_swap(t, j);
            }
            if self.a.get(t, t) < 0 {
                self.row_negate(t);
            }
            diag.push(self.a.get(t, t));
            t += 1;
        }
        Ok(SmithForm { rows, cols, diag, log: self.log, u_inv: self.u_inv, v: self.v, v_inv: self.v_inv })
    }
}

pub fn smith_normal_form(a: &IntMatrix, track: Track) -> Result<SmithForm> {
    let reducer = Reducer {
        a: a.clone(),
        track,
        log: Vec::new(),
        u_inv: track.u_inv.then(|| IntMatrix::identity(a.rows)),
        v: track.v.then(|| IntMatrix::identity(a.cols)),
        v_inv: track.v_inv.then(|| IntMatrix::identity(a.cols)),
    };
    reducer.run()
}
