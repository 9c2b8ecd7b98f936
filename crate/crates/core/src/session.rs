//! JSON session specs: an algebra, commuting automorphisms with their
//! orders, and the window/margin/seed parameters of the verification runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kaehler::graded_dim;
use crate::laurent::{Degree, Window};
use crate::liealg::{check_commuting, Family, LieAutomorphism, SplitSimpleLieAlgebra};
use crate::linalg::Matrix;
use crate::loopdescent::Multiloop;
use crate::scalars::{lcm, CyclotomicField};

fn default_window() -> i64 {
    2
}

fn default_margin() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub family: String,
    pub rank: usize,
}

/// An exact scalar entry: an integer or a string such as `"1/2 - z^2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AutoSpec {
    /// Permutation of the simple roots (0-based).
    Diagram { perm: Vec<usize> },
    /// Explicit matrix in the Chevalley basis (rows), of the given order.
    Matrix { entries: Vec<Vec<ScalarSpec>>, order: u32 },
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionSpec {
    pub algebra: AlgebraSpec,
    pub autos: Vec<AutoSpec>,
    pub orders: Vec<u32>,
    #[serde(default = "default_window")]
    pub window: i64,
    #[serde(default = "default_margin")]
    pub margin: i64,
    #[serde(default)]
    pub seed: u64,
}

impl SessionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `lcm` of the declared orders: the conductor of `k = Q(zeta_M)`.
    pub fn conductor(&self) -> u32 {
        self.orders.iter().fold(1u64, |acc, &m| lcm(acc, m as u64)) as u32
    }

    pub fn validate(&self) -> Result<()> {
        if self.autos.len() != self.orders.len() {
            return Err(Error::InvalidSpec(format!(
                "{} automorphisms but {} orders",
                self.autos.len(),
                self.orders.len()
            )));
        }
        if self.orders.is_empty() {
            return Err(Error::InvalidSpec("at least one variable is required".into()));
        }
        if self.orders.contains(&0) {
            return Err(Error::InvalidSpec("orders must be positive".into()));
        }
        if self.window < 1 {
            return Err(Error::InvalidSpec("window must be at least 1".into()));
        }
        if self.margin < 0 {
            return Err(Error::InvalidSpec("margin must be non-negative".into()));
        }
        Ok(())
    }

    /// Validates and constructs the multiloop algebra.
    pub fn build(&self) -> Result<Session> {
        self.validate()?;
        let family = Family::from_letter(&self.algebra.family)?;
        let g = Arc::new(SplitSimpleLieAlgebra::build(family, self.algebra.rank)?);
        let field = CyclotomicField::new(self.conductor())?;
        let mut autos = Vec::new();
        for (spec, &m) in self.autos.iter().zip(&self.orders) {
            let a = match spec {
                AutoSpec::Identity => LieAutomorphism::identity(&g, &field),
                AutoSpec::Diagram { perm } => LieAutomorphism::diagram(&g, &field, perm)?,
                AutoSpec::Matrix { entries, order } => {
                    if *order != m {
                        return Err(Error::OrderMismatch(format!("matrix order {order} but declared order {m}")));
                    }
                    let rows = entries
                        .iter()
                        .map(|r| {
                            r.iter()
                                .map(|c| match c {
                                    ScalarSpec::Int(i) => Ok(field.from_int(*i)),
                                    ScalarSpec::Text(t) => field.parse(t),
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let matrix = Matrix::from_rows(&field, rows)?;
                    if matrix.rows() != g.dim() || matrix.cols() != g.dim() {
                        return Err(Error::DimensionMismatch { expected: g.dim(), got: matrix.rows() });
                    }
                    LieAutomorphism::from_matrix(&g, matrix, *order)?
                }
            };
            if a.order() != m {
                return Err(Error::OrderMismatch(format!("automorphism has order {} but declared order {m}", a.order())));
            }
            autos.push(a);
        }
        check_commuting(&autos)?;
        let ml = Multiloop::new(g, &field, autos, &self.orders)?;
        Ok(Session { spec: self.clone(), ml })
    }
}

/// A validated spec with its constructed algebra.
pub struct Session {
    pub spec: SessionSpec,
    pub ml: Multiloop,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaDim {
    pub degree: Degree,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Info {
    pub algebra: String,
    pub dim_g: usize,
    pub nvars: usize,
    pub orders: Vec<u32>,
    pub conductor: u32,
    pub eigendims: BTreeMap<String, usize>,
    pub g0_dim: usize,
    pub g0_central_simple: bool,
    pub window: i64,
    pub margin: i64,
    pub seed: u64,
    pub omega_dims: Vec<OmegaDim>,
}

/// Joins the entries of an eigenspace class, e.g. `[0, 1] -> "0,1"`.
pub fn class_label(c: &[u32]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Session {
    pub fn window(&self) -> Window {
        Window::new(self.ml.nvars(), self.spec.window)
    }

    pub fn info(&self) -> Result<Info> {
        let ml = &self.ml;
        let g0 = ml.g0_subalgebra()?;
        let omega_dims = self
            .window()
            .degrees()
            .into_iter()
            .filter(|a| ml.ring().is_base_degree(a))
            .map(|a| OmegaDim { dim: graded_dim(&a), degree: a })
            .collect();
        Ok(Info {
            algebra: format!("{}{}", self.spec.algebra.family.to_uppercase(), self.spec.algebra.rank),
            dim_g: ml.dim(),
            nvars: ml.nvars(),
            orders: self.spec.orders.clone(),
            conductor: self.spec.conductor(),
            eigendims: ml.eigen().dims().into_iter().map(|(c, d)| (class_label(&c), d)).collect(),
            g0_dim: g0.dim(),
            g0_central_simple: g0.is_central_simple()?,
            window: self.spec.window,
            margin: self.spec.margin,
            seed: self.spec.seed,
            omega_dims,
        })
    }
}
