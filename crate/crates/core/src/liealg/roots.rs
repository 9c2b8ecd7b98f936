//! Root systems from Cartan types: symmetrized forms, positive roots and
//! extraspecial pairs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn from_letter(s: &str) -> Result<Family> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            other => return Err(Error::InvalidType(other.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    /// Gram matrix `(alpha_i, alpha_j)` of the simple roots, scaled so that
    /// short roots have squared length 2.
    pub fn inner_products(&self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let mut b = vec![vec![0i64; l]; l];
        let link = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            b[i][j] = v;
            b[j][i] = v;
        };
        match self.family {
            Family::A => {
                for i in 0..l {
                    b[i][i] = 2;
                }
                for i in 0..l - 1 {
                    link(&mut b, i, i + 1, -1);
                }
            }
            Family::B => {
                for i in 0..l - 1 {
                    b[i][i] = 4;
                }
                b[l - 1][l - 1] = 2;
                for i in 0..l - 1 {
                    link(&mut b, i, i + 1, -2);
                }
            }
            Family::C => {
                for i in 0..l - 1 {
                    b[i][i] = 2;
                }
                b[l - 1][l - 1] = 4;
                for i in 0..l - 2 {
                    link(&mut b, i, i + 1, -1);
                }
                link(&mut b, l - 2, l - 1, -2);
            }
            Family::D => {
                for i in 0..l {
                    b[i][i] = 2;
                }
                for i in 0..l - 2 {
                    link(&mut b, i, i + 1, -1);
                }
                link(&mut b, l - 3, l - 1, -1);
            }
            Family::E => {
                // Bourbaki numbering: 1-3-4-5-6-7-8 with 2 attached to 4.
                for i in 0..l {
                    b[i][i] = 2;
                }
                link(&mut b, 0, 2, -1);
                link(&mut b, 1, 3, -1);
                for i in 2..l - 1 {
                    link(&mut b, i, i + 1, -1);
                }
            }
            Family::F => {
                b[0][0] = 4;
                b[1][1] = 4;
                b[2][2] = 2;
                b[3][3] = 2;
                link(&mut b, 0, 1, -2);
                link(&mut b, 1, 2, -2);
                link(&mut b, 2, 3, -1);
            }
            Family::G => {
                b[0][0] = 2;
                b[1][1] = 6;
                link(&mut b, 0, 1, -3);
            }
        }
        b
    }

    pub fn expected_positive_roots(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1) / 2,
            Family::B | Family::C => l * l,
            Family::D => l * (l - 1),
            Family::E => match l {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }
}

pub type Root = Vec<i64>;

#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    form: Vec<Vec<i64>>,
    /// `cartan[i][j] = <alpha_i^vee, alpha_j>`.
    cartan: Vec<Vec<i64>>,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
    /// For each positive root, its extraspecial pair (indices into
    /// `positive`), or `None` for simple roots.
    extraspecial: Vec<Option<(usize, usize)>>,
}

fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Result<Self> {
        let form = cartan_type.inner_products();
        let l = cartan_type.rank;
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| 2 * form[i][j] / form[i][i]).collect())
            .collect();

        let simple: Vec<Root> = (0..l)
            .map(|i| {
                let mut r = vec![0; l];
                r[i] = 1;
                r
            })
            .collect();
        let mut positive: Vec<Root> = simple.clone();
        let mut index: HashMap<Root, usize> = positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut frontier = simple.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..l {
                    if *beta == simple[i] {
                        continue;
                    }
                    // p: how far the alpha_i-string extends below beta.
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if index.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..l).map(|j| beta[j] * cartan[i][j]).sum();
                    let q = p - pairing;
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !index.contains_key(&up) {
                            index.insert(up.clone(), positive.len());
                            positive.push(up.clone());
                            next.push(up);
                        }
                    }
                }
            }
            frontier = next;
        }
        positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
        let index: HashMap<Root, usize> = positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        if positive.len() != cartan_type.expected_positive_roots() {
            return Err(Error::InvalidType(format!(
                "{cartan_type}: found {} positive roots",
                positive.len()
            )));
        }

        let mut extraspecial = vec![None; positive.len()];
        for (k, xi) in positive.iter().enumerate() {
            if height(xi) == 1 {
                continue;
            }
            'search: for (a, alpha) in positive.iter().enumerate() {
                if a >= k {
                    break;
                }
                let beta: Root = xi.iter().zip(alpha).map(|(x, y)| x - y).collect();
                if let Some(&b) = index.get(&beta) {
                    if a < b {
                        extraspecial[k] = Some((a, b));
                        break 'search;
                    }
                }
            }
        }

        Ok(RootSystem {
            cartan_type,
            form,
            cartan,
            positive,
            index,
            extraspecial,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn extraspecial_pair(&self, k: usize) -> Option<(usize, usize)> {
        self.extraspecial[k]
    }

    pub fn positive_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    /// Signed index: `0..N` positive roots, `N..2N` their negatives.
    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        if let Some(&i) = self.index.get(r) {
            return Some(i);
        }
        let neg: Root = r.iter().map(|x| -x).collect();
        self.index.get(&neg).map(|&i| i + self.positive.len())
    }

    pub fn root(&self, idx: usize) -> Root {
        let n = self.positive.len();
        if idx < n {
            self.positive[idx].clone()
        } else {
            self.positive[idx - n].iter().map(|x| -x).collect()
        }
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let l = self.rank();
        let mut s = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                s += a[i] * self.form[i][j] * b[j];
            }
        }
        s
    }

    /// `<a, alpha_i^vee>`.
    pub fn coroot_pairing(&self, a: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| a[j] * self.cartan[i][j]).sum()
    }

    /// Coefficients of the coroot `a^vee` in the simple coroots.
    pub fn coroot_coefficients(&self, a: &[i64]) -> Vec<i64> {
        let aa = self.inner(a, a);
        (0..self.rank())
            .map(|i| {
                let num = a[i] * self.form[i][i];
                debug_assert_eq!(num % aa, 0);
                num / aa
            })
            .collect()
    }

    /// Largest `p` with `beta - p*alpha` a root.
    pub fn string_below(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut p = 0;
        let mut cur: Root = beta.to_vec();
        loop {
            for (c, a) in cur.iter_mut().zip(alpha) {
                *c -= a;
            }
            if self.root_index(&cur).is_some() {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// Root strings `beta - p alpha, ..., beta + q alpha` are unbroken for
    /// every pair of non-proportional roots.
    pub fn verify_root_strings(&self) -> bool {
        let n = self.positive.len();
        let all: Vec<Root> = (0..2 * n).map(|i| self.root(i)).collect();
        for a in &all {
            for b in &all {
                if a == b || a.iter().zip(b).all(|(x, y)| *x == -*y) {
                    continue;
                }
                let p = self.string_below(a, b);
                let q = p - (2 * self.inner(b, a)) / self.inner(a, a);
                // every member of the predicted string is a root
                for k in -p..=q {
                    let r: Root = b.iter().zip(a).map(|(y, x)| y + k * x).collect();
                    if self.root_index(&r).is_none() {
                        return false;
                    }
                }
                let beyond: Root = b.iter().zip(a).map(|(y, x)| y + (q + 1) * x).collect();
                if self.root_index(&beyond).is_some() {
                    return false;
                }
            }
        }
        true
    }
}
