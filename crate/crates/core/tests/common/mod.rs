//! Brute-force reference computations over plain problem-file JSON.
//!
//! Nothing here calls into the library's model types: numbers are parsed with
//! `BigRational`'s own `FromStr`, and every quantity is recomputed from its
//! definition with straight loops.

#![allow(dead_code)]

use std::collections::HashMap;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

pub type Q = BigRational;

pub fn q(text: &str) -> Q {
    Q::from_str(text).unwrap_or_else(|_| panic!("oracle cannot parse `{text}`"))
}

pub fn qi(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// A problem as flat vectors indexed by state and action.
#[derive(Debug, Clone)]
pub struct Plain {
    pub prior: Vec<Q>,
    /// `utility[a][s]`.
    pub utility: Vec<Vec<Q>>,
    pub cells: Vec<Vec<usize>>,
    /// `None` means conditionalization.
    pub posteriors: Option<Vec<Option<Vec<Q>>>>,
}

impl Plain {
    pub fn from_json(text: &str) -> Self {
        let v: Value = serde_json::from_str(text).expect("oracle input is JSON");
        let states: Vec<String> = v["states"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["id"].as_str().unwrap().to_string())
            .collect();
        let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let prior = v["states"].as_array().unwrap().iter().map(|s| q(s["prob"].as_str().unwrap())).collect();
        let utils: HashMap<&str, Q> = v["outcomes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|o| (o["id"].as_str().unwrap(), q(o["utility"].as_str().unwrap())))
            .collect();
        let utility = v["actions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| {
                states
                    .iter()
                    .map(|s| utils[a["map"][s.as_str()].as_str().unwrap()].clone())
                    .collect()
            })
            .collect();
        let cells = v["partition"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_array().unwrap().iter().map(|s| index[s.as_str().unwrap()]).collect())
            .collect();
        let posteriors = match &v["policy"] {
            Value::String(s) => {
                assert_eq!(s, "conditionalization");
                None
            }
            Value::Array(entries) => {
                let mut out = vec![None; states.len()];
                for e in entries {
                    let mut mass = vec![Q::zero(); states.len()];
                    for (t, m) in e["posterior"].as_object().unwrap() {
                        mass[index[t.as_str()]] = q(m.as_str().unwrap());
                    }
                    out[index[e["state"].as_str().unwrap()]] = Some(mass);
                }
                Some(out)
            }
            other => panic!("unexpected policy {other}"),
        };
        Plain {
            prior,
            utility,
            cells,
            posteriors,
        }
    }

    pub fn n(&self) -> usize {
        self.prior.len()
    }

    pub fn cell_of(&self, s: usize) -> usize {
        self.cells.iter().position(|c| c.contains(&s)).unwrap()
    }

    pub fn conditioned(&self, cell: usize) -> Vec<Q> {
        let total: Q = self.cells[cell].iter().map(|&s| self.prior[s].clone()).sum();
        (0..self.n())
            .map(|s| {
                if self.cells[cell].contains(&s) {
                    &self.prior[s] / &total
                } else {
                    Q::zero()
                }
            })
            .collect()
    }

    pub fn posterior(&self, s: usize) -> Vec<Q> {
        match &self.posteriors {
            None => self.conditioned(self.cell_of(s)),
            Some(p) => p[s].clone().expect("positive-prior states carry posteriors"),
        }
    }

    pub fn eu(&self, dist: &[Q], a: usize) -> Q {
        dist.iter().zip(&self.utility[a]).map(|(p, u)| p * u).sum()
    }

    /// First maximizer, and whether it is unique.
    pub fn argmax(&self, dist: &[Q]) -> (usize, bool) {
        let eus: Vec<Q> = (0..self.utility.len()).map(|a| self.eu(dist, a)).collect();
        let best = eus.iter().max().unwrap();
        let first = eus.iter().position(|e| e == best).unwrap();
        (first, eus.iter().filter(|e| *e == best).count() == 1)
    }

    pub fn max_eu(&self, dist: &[Q]) -> Q {
        (0..self.utility.len()).map(|a| self.eu(dist, a)).max().unwrap()
    }

    pub fn cell_prob(&self, cell: usize) -> Q {
        self.cells[cell].iter().map(|&s| self.prior[s].clone()).sum()
    }

    pub fn val_good(&self) -> Q {
        let after: Q = (0..self.cells.len())
            .map(|c| self.cell_prob(c) * self.max_eu(&self.conditioned(c)))
            .sum();
        after - self.max_eu(&self.prior)
    }

    pub fn chosen(&self, s: usize) -> usize {
        self.argmax(&self.posterior(s)).0
    }

    /// Per-state definitional sum.
    pub fn val_general(&self) -> Q {
        let after: Q = (0..self.n())
            .filter(|&s| !self.prior[s].is_zero())
            .map(|s| &self.prior[s] * &self.utility[self.chosen(s)][s])
            .sum();
        after - self.max_eu(&self.prior)
    }

    /// `Σ_E p(E) Σ_f p(choose f | E)·E_{p|E} f − max prior EU`.
    pub fn val_general_by_cells(&self) -> Q {
        let mut total = Q::zero();
        for c in 0..self.cells.len() {
            let pe = self.cell_prob(c);
            let cond = self.conditioned(c);
            for a in 0..self.utility.len() {
                let choose: Q = self.cells[c]
                    .iter()
                    .filter(|&&s| !self.prior[s].is_zero() && self.chosen(s) == a)
                    .map(|&s| self.prior[s].clone())
                    .sum();
                total += &pe * (choose / &pe) * self.eu(&cond, a);
            }
        }
        total - self.max_eu(&self.prior)
    }

    /// Some action is among the conditional maximizers in every cell.
    pub fn irrelevant(&self) -> bool {
        (0..self.utility.len()).any(|a| {
            (0..self.cells.len()).all(|c| {
                let cond = self.conditioned(c);
                self.eu(&cond, a) == self.max_eu(&cond)
            })
        })
    }
}
