use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnumerableOracle, OracleError, OracleQuery, OracleResponse, ParetoOracle};
use crate::geometry::{pprune, ValueVec};

/// Fault-injecting wrapper around an enumerable oracle.
///
/// With probability `p_fault` a successful answer is replaced by the best
/// scoring feasible point that still strictly dominates the referent but is
/// not Pareto optimal. If no such point exists the inner answer passes
/// through. The coin for query `k` depends only on `(seed, k)`.
#[derive(Debug)]
pub struct NoisyOracle<O> {
    inner: O,
    p_fault: f64,
    seed: u64,
    queries: u64,
    pareto_optimal: Vec<bool>,
    faults: u64,
}

impl<O: EnumerableOracle> NoisyOracle<O> {
    pub fn new(inner: O, p_fault: f64, seed: u64) -> Result<Self, OracleError> {
        if !(0.0..1.0).contains(&p_fault) {
            return Err(OracleError::InvalidFaultProbability(p_fault));
        }
        let front = pprune(inner.feasible())?;
        let pareto_optimal = inner.feasible().iter().map(|v| front.contains(v)).collect();
        Ok(NoisyOracle {
            inner,
            p_fault,
            seed,
            queries: 0,
            pareto_optimal,
            faults: 0,
        })
    }

    /// Number of injected faults so far.
    pub fn faults(&self) -> u64 {
        self.faults
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    fn fault_point(&self, q: &OracleQuery) -> Option<&ValueVec> {
        let mut best: Option<(f64, &ValueVec)> = None;
        for (v, optimal) in self.inner.feasible().iter().zip(&self.pareto_optimal) {
            if *optimal || !v.strictly_dominates(&q.referent) {
                continue;
            }
            let s = self.inner.score(v, q);
            let replace = match best {
                None => true,
                Some((bs, bv)) => match s.partial_cmp(&bs) {
                    Some(Ordering::Greater) => true,
                    Some(Ordering::Equal) => v.lex_cmp(bv) == Ordering::Greater,
                    _ => false,
                },
            };
            if replace {
                best = Some((s, v));
            }
        }
        best.map(|(_, v)| v)
    }
}

impl<O: EnumerableOracle> ParetoOracle for NoisyOracle<O> {
    fn query(&mut self, q: &OracleQuery) -> Result<OracleResponse, OracleError> {
        let index = self.queries;
        self.queries += 1;
        let mut resp = self.inner.query(q)?;
        if self.p_fault == 0.0 {
            return Ok(resp);
        }
        resp.exact = false;
        if !resp.success {
            return Ok(resp);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        if rng.gen::<f64>() >= self.p_fault {
            return Ok(resp);
        }
        if let Some(v) = self.fault_point(q).cloned() {
            self.faults += 1;
            resp.value = Some(v);
            resp.solution = None;
        }
        Ok(resp)
    }
}

impl<O: EnumerableOracle> EnumerableOracle for NoisyOracle<O> {
    fn feasible(&self) -> &[ValueVec] {
        self.inner.feasible()
    }

    fn score(&self, v: &ValueVec, query: &OracleQuery) -> f64 {
        self.inner.score(v, query)
    }
}
