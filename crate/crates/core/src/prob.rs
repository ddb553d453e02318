//! Finite probability with exact rational masses.
//!
//! A [`StateSpace`] fixes an ordered list of opaque state ids. Events,
//! credences and state functions all hold an `Arc` to the space they live
//! on, and every binary operation checks that both sides share it.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{display_rational, Rational};

/// Ordered, duplicate-free list of state identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl StateSpace {
    pub fn new<I, S>(ids: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateState(id.clone()));
            }
        }
        Ok(Arc::new(StateSpace { ids, index }))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }
}

pub(crate) fn same_space(a: &Arc<StateSpace>, b: &Arc<StateSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn ensure_same(a: &Arc<StateSpace>, b: &Arc<StateSpace>) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A subset of a state space, stored as a membership mask.
#[derive(Debug, Clone)]
pub struct Event {
    space: Arc<StateSpace>,
    mask: Vec<bool>,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.mask == other.mask
    }
}

impl Eq for Event {}

impl Event {
    pub fn from_ids<I, S>(space: &Arc<StateSpace>, ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = vec![false; space.len()];
        for id in ids {
            mask[space.require(id.as_ref())?] = true;
        }
        Ok(Event {
            space: Arc::clone(space),
            mask,
        })
    }

    pub fn from_indices<I>(space: &Arc<StateSpace>, indices: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = vec![false; space.len()];
        for i in indices {
            mask[i] = true;
        }
        Event {
            space: Arc::clone(space),
            mask,
        }
    }

    pub fn from_predicate(space: &Arc<StateSpace>, mut pred: impl FnMut(usize) -> bool) -> Self {
        Event {
            space: Arc::clone(space),
            mask: (0..space.len()).map(&mut pred).collect(),
        }
    }

    pub fn full(space: &Arc<StateSpace>) -> Self {
        Event {
            space: Arc::clone(space),
            mask: vec![true; space.len()],
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask[index]
    }

    /// Member indices in state-space order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn member_ids(&self) -> Vec<&str> {
        self.members().map(|i| self.space.id(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn complement(&self) -> Self {
        Event {
            space: Arc::clone(&self.space),
            mask: self.mask.iter().map(|m| !m).collect(),
        }
    }

    pub fn intersect(&self, other: &Event) -> Result<Self> {
        ensure_same(&self.space, &other.space)?;
        Ok(Event {
            space: Arc::clone(&self.space),
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(a, b)| *a && *b)
                .collect(),
        })
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.member_ids().join(", "))
    }
}

/// An exact probability function over a finite state space.
#[derive(Debug, Clone)]
pub struct Credence {
    space: Arc<StateSpace>,
    mass: Vec<Rational>,
}

impl PartialEq for Credence {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.mass == other.mass
    }
}

impl Eq for Credence {}

impl Credence {
    /// Builds a credence from one mass per state, in space order.
    pub fn new(space: &Arc<StateSpace>, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidCredence(format!(
                "expected {} masses, got {}",
                space.len(),
                mass.len()
            )));
        }
        for (i, m) in mass.iter().enumerate() {
            if m.is_negative() {
                return Err(Error::InvalidCredence(format!(
                    "negative mass {} on `{}`",
                    display_rational(m),
                    space.id(i)
                )));
            }
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidCredence(format!(
                "masses sum to {}, not 1",
                display_rational(&total)
            )));
        }
        Ok(Credence {
            space: Arc::clone(space),
            mass,
        })
    }

    /// Builds a credence from `(state, mass)` pairs; omitted states get 0.
    pub fn from_pairs<I, S>(space: &Arc<StateSpace>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: AsRef<str>,
    {
        let mut mass = vec![Rational::zero(); space.len()];
        let mut seen = vec![false; space.len()];
        for (id, m) in pairs {
            let i = space.require(id.as_ref())?;
            if seen[i] {
                return Err(Error::InvalidCredence(format!(
                    "state `{}` listed twice",
                    id.as_ref()
                )));
            }
            seen[i] = true;
            mass[i] = m;
        }
        Credence::new(space, mass)
    }

    pub fn uniform(space: &Arc<StateSpace>) -> Self {
        let m = Rational::new(1.into(), space.len().into());
        Credence {
            space: Arc::clone(space),
            mass: vec![m; space.len()],
        }
    }

    /// Point mass on one state.
    pub fn dirac(space: &Arc<StateSpace>, index: usize) -> Self {
        let mut mass = vec![Rational::zero(); space.len()];
        mass[index] = Rational::one();
        Credence {
            space: Arc::clone(space),
            mass,
        }
    }

    pub(crate) fn from_raw(space: &Arc<StateSpace>, mass: Vec<Rational>) -> Self {
        debug_assert_eq!(mass.len(), space.len());
        Credence {
            space: Arc::clone(space),
            mass,
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn mass(&self, index: usize) -> &Rational {
        &self.mass[index]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn mass_of(&self, id: &str) -> Result<&Rational> {
        Ok(&self.mass[self.space.require(id)?])
    }

    /// Indices of states carrying positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mass
            .iter()
            .enumerate()
            .filter_map(|(i, m)| (!m.is_zero()).then_some(i))
    }

    pub fn probability(&self, event: &Event) -> Result<Rational> {
        ensure_same(&self.space, &event.space)?;
        Ok(event.members().map(|i| &self.mass[i]).sum())
    }

    /// Ratio conditioning: `p(ω | E) = p(ω) / p(E)` on `E`, zero elsewhere.
    pub fn condition(&self, event: &Event) -> Result<Credence> {
        let pe = self.probability(event)?;
        if pe.is_zero() {
            return Err(Error::ZeroProbability(event.to_string()));
        }
        let mass = self
            .mass
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if event.contains(i) {
                    m / &pe
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(Credence {
            space: Arc::clone(&self.space),
            mass,
        })
    }

    pub fn expectation(&self, x: &StateFunction) -> Result<Rational> {
        ensure_same(&self.space, &x.space)?;
        Ok(self
            .mass
            .iter()
            .zip(&x.values)
            .filter(|(m, _)| !m.is_zero())
            .map(|(m, v)| m * v)
            .sum())
    }
}

/// A rational-valued random variable on a state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateFunction {
    space: Arc<StateSpace>,
    values: Vec<Rational>,
}

impl StateFunction {
    pub fn new(space: &Arc<StateSpace>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(StateFunction {
            space: Arc::clone(space),
            values,
        })
    }

    pub fn from_pairs<I, S>(space: &Arc<StateSpace>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: AsRef<str>,
    {
        let mut values: Vec<Option<Rational>> = vec![None; space.len()];
        for (id, v) in pairs {
            values[space.require(id.as_ref())?] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnknownState(format!("no value for `{}`", space.id(i)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(StateFunction {
            space: Arc::clone(space),
            values,
        })
    }

    pub fn constant(space: &Arc<StateSpace>, value: Rational) -> Self {
        StateFunction {
            space: Arc::clone(space),
            values: vec![value; space.len()],
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn value(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// True iff `cells` are non-empty, pairwise disjoint and cover `space`.
pub fn is_partition(space: &Arc<StateSpace>, cells: &[Event]) -> bool {
    let mut covered = vec![false; space.len()];
    for cell in cells {
        if !same_space(space, &cell.space) || cell.is_empty() {
            return false;
        }
        for i in cell.members() {
            if covered[i] {
                return false;
            }
            covered[i] = true;
        }
    }
    covered.into_iter().all(|c| c)
}
