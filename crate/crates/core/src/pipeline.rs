//! The structural data of a representation computed once and shared by the
//! downstream computations.

use serde::{Deserialize, Serialize};

use crate::envelope::{Envelope, FactorKind};
use crate::error::Result;
use crate::liestruct::{levi_decompose, verify_lemmas, LemmaReport, LeviData, LinearRep};

/// `ρ(L)` with its envelope, radical, chain and Levi-type decomposition.
#[derive(Clone, Debug)]
pub struct Structure {
    pub rep: LinearRep,
    pub env: Envelope,
    pub levi: LeviData,
}

impl Structure {
    pub fn build(rep: LinearRep, seed: u64) -> Result<Structure> {
        let env = Envelope::build(&rep, seed)?;
        Structure::with_envelope(rep, env)
    }

    /// Reuses an envelope computed earlier for the same representation.
    pub fn with_envelope(rep: LinearRep, env: Envelope) -> Result<Structure> {
        let levi = levi_decompose(&rep, &env)?;
        Ok(Structure { rep, env, levi })
    }

    pub fn verify(&self) -> Result<LemmaReport> {
        verify_lemmas(&self.rep, &self.env, &self.levi)
    }

    pub fn report(&self, name: &str) -> Result<StructureReport> {
        Ok(StructureReport {
            name: name.to_string(),
            dim_v: self.rep.dim_v(),
            dim_l: self.rep.dim_l(),
            dim_a: self.env.dim_a(),
            dim_g: self.levi.g.dim(),
            dim_r: self.levi.r.dim(),
            dim_s: self.levi.s.dim(),
            dim_j: self.env.radical().dim(),
            dim_l_cap_j: self.levi.l_cap_j.dim(),
            p: self.env.nilpotency_index(),
            theta: self.env.theta(),
            factor_dims: self.env.factor_dims(),
            factor_kinds: self.env.factor_kinds().to_vec(),
            lemmas: self.verify()?,
        })
    }
}

/// Summary printed by `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub name: String,
    pub dim_v: usize,
    pub dim_l: usize,
    pub dim_a: usize,
    pub dim_g: usize,
    pub dim_r: usize,
    pub dim_s: usize,
    pub dim_j: usize,
    pub dim_l_cap_j: usize,
    pub p: usize,
    pub theta: usize,
    pub factor_dims: Vec<usize>,
    pub factor_kinds: Vec<FactorKind>,
    pub lemmas: LemmaReport,
}
