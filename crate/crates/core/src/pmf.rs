//! Finite probability mass functions and multi-variable entropy bookkeeping.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::entropy::plogp;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a pmf.
pub const MASS_TOL: f64 = 1e-12;

fn check_mass(mass: &[f64], tol: f64) -> Result<()> {
    if mass.is_empty() {
        return Err(Error::InvalidPmf("empty support".into()));
    }
    if let Some(m) = mass.iter().find(|m| !m.is_finite() || **m < 0.0) {
        return Err(Error::InvalidPmf(format!("negative or non-finite mass {m}")));
    }
    let total: f64 = mass.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidPmf(format!("masses sum to {total}")));
    }
    Ok(())
}

/// A pmf on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePmf {
    mass: Vec<f64>,
}

impl FinitePmf {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        check_mass(&mass, MASS_TOL)?;
        Ok(FinitePmf { mass })
    }

    pub fn uniform(n: usize) -> Self {
        FinitePmf { mass: vec![1.0 / n as f64; n] }
    }

    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
}

/// Joint pmf `p(u, x1, x2)` stored row-major with `x2` fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Joint3Pmf {
    pub u_size: usize,
    pub x1_size: usize,
    pub x2_size: usize,
    mass: Vec<f64>,
}

impl Joint3Pmf {
    pub fn new(u_size: usize, x1_size: usize, x2_size: usize, mass: Vec<f64>) -> Result<Self> {
        if u_size * x1_size * x2_size != mass.len() || mass.is_empty() {
            return Err(Error::Dimension(format!(
                "mass of length {} does not match {u_size} x {x1_size} x {x2_size}",
                mass.len()
            )));
        }
        check_mass(&mass, MASS_TOL)?;
        Ok(Joint3Pmf { u_size, x1_size, x2_size, mass })
    }

    /// Builds from masses that may carry round-off; renormalizes.
    pub fn from_unnormalized(u_size: usize, x1_size: usize, x2_size: usize, mut mass: Vec<f64>) -> Result<Self> {
        let total: f64 = mass.iter().map(|m| m.max(0.0)).sum();
        if total <= 0.0 {
            return Err(Error::InvalidPmf("zero total mass".into()));
        }
        for m in mass.iter_mut() {
            *m = m.max(0.0) / total;
        }
        Joint3Pmf::new(u_size, x1_size, x2_size, mass)
    }

    /// `U` constant and `(X1, X2)` distributed as `p_x1x2` (row-major, `x2` fastest).
    pub fn with_constant_u(x1_size: usize, x2_size: usize, p_x1x2: &[f64]) -> Result<Self> {
        Joint3Pmf::new(1, x1_size, x2_size, p_x1x2.to_vec())
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn at(&self, u: usize, x1: usize, x2: usize) -> f64 {
        self.mass[(u * self.x1_size + x1) * self.x2_size + x2]
    }

    /// Marginal `p(x1, x2)`.
    pub fn x_marginal(&self) -> Vec<f64> {
        let k = self.x1_size * self.x2_size;
        let mut out = vec![0.0; k];
        for (i, m) in self.mass.iter().enumerate() {
            out[i % k] += m;
        }
        out
    }
}

/// For each subset mask: marginal table size and the marginal offset of
/// every flat index.
type Layout = Vec<(usize, Vec<u32>)>;

thread_local! {
    static LAYOUTS: RefCell<HashMap<Vec<usize>, Rc<Layout>>> = RefCell::new(HashMap::new());
}

fn layout_for(dims: &[usize]) -> Rc<Layout> {
    LAYOUTS.with(|cell| {
        if let Some(l) = cell.borrow().get(dims) {
            return l.clone();
        }
        let k = dims.len();
        let n: usize = dims.iter().product();
        let mut layout: Layout = Vec::with_capacity(1 << k);
        for mask in 0usize..(1 << k) {
            let size: usize = (0..k).filter(|v| mask >> v & 1 == 1).map(|v| dims[v]).product();
            let mut map = Vec::with_capacity(n);
            for idx in 0..n {
                let mut rem = idx;
                let mut digits = [0usize; 8];
                for v in (0..k).rev() {
                    digits[v] = rem % dims[v];
                    rem /= dims[v];
                }
                let mut off = 0;
                for v in 0..k {
                    if mask >> v & 1 == 1 {
                        off = off * dims[v] + digits[v];
                    }
                }
                map.push(off as u32);
            }
            layout.push((size, map));
        }
        let l = Rc::new(layout);
        cell.borrow_mut().insert(dims.to_vec(), l.clone());
        l
    })
}

/// Joint pmf over several finite variables with all subset entropies
/// precomputed. Variables are addressed by index; subsets by bitmask.
#[derive(Debug, Clone)]
pub struct JointTable {
    dims: Vec<usize>,
    subset_entropy: Vec<f64>,
}

impl JointTable {
    /// `mass` is row-major over `dims` (last variable fastest).
    pub fn new(dims: &[usize], mass: &[f64]) -> Self {
        debug_assert!(dims.len() <= 8);
        debug_assert_eq!(dims.iter().product::<usize>(), mass.len());
        let layout = layout_for(dims);
        let mut subset_entropy = vec![0.0; 1 << dims.len()];
        let mut buf = Vec::new();
        for (mask, (size, map)) in layout.iter().enumerate().skip(1) {
            buf.clear();
            buf.resize(*size, 0.0);
            for (m, &off) in mass.iter().zip(map.iter()) {
                buf[off as usize] += m;
            }
            subset_entropy[mask] = buf.iter().copied().map(plogp).sum();
        }
        JointTable { dims: dims.to_vec(), subset_entropy }
    }

    pub fn num_vars(&self) -> usize {
        self.dims.len()
    }

    /// `H(vars in mask)`.
    #[inline]
    pub fn h(&self, mask: usize) -> f64 {
        self.subset_entropy[mask]
    }

    /// `H(A | C)`.
    #[inline]
    pub fn h_given(&self, a: usize, c: usize) -> f64 {
        self.h(a | c) - self.h(c)
    }

    /// `I(A; B | C)`; pass `c = 0` for the unconditional version.
    #[inline]
    pub fn cmi(&self, a: usize, b: usize, c: usize) -> f64 {
        self.h(a | c) + self.h(b | c) - self.h(a | b | c) - self.h(c)
    }
}
