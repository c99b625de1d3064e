//! Decomposition of a product of two characters over the characters one
//! level up.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linsolve::{decompose_lazy, Decomposition, DecompositionJson};
use crate::numerators::{character, ModuleLabel};
use crate::rat::{self, int, Rat};

/// All labels (level, m₂) with m₂ ≡ parity (mod 2), provided every one of
/// them has an explicit character.
pub fn character_basis(level: u32, parity: u32) -> Result<Vec<ModuleLabel>> {
    let labels: Vec<ModuleLabel> = (0..=level)
        .filter(|m2| m2 % 2 == parity % 2)
        .map(|m2| ModuleLabel { m: level, m2 })
        .collect();
    if labels.is_empty() || !labels.iter().all(ModuleLabel::is_supported) {
        return Err(Error::BasisUnavailable(format!(
            "level {level} characters with m2 of parity {}",
            parity % 2
        )));
    }
    Ok(labels)
}

#[derive(Clone, Debug)]
pub struct Branching {
    pub left: ModuleLabel,
    pub right: ModuleLabel,
    pub basis: Vec<ModuleLabel>,
    pub decomposition: Decomposition,
}

#[derive(Serialize)]
pub struct BranchingJson {
    pub left: String,
    pub right: String,
    pub basis: Vec<String>,
    pub decomposition: DecompositionJson,
}

impl Branching {
    pub fn to_json(&self) -> BranchingJson {
        BranchingJson {
            left: self.left.to_string(),
            right: self.right.to_string(),
            basis: self.basis.iter().map(ToString::to_string).collect(),
            decomposition: self.decomposition.to_json(),
        }
    }
}

/// ch(left)·ch(right) = Σ b_{m₂″}·ch(m+m′, m₂″) with coefficients exact below `order`.
pub fn branch(left: ModuleLabel, right: ModuleLabel, order: Rat) -> Result<Branching> {
    let basis = character_basis(left.m + right.m, left.m2 + right.m2)?;
    let target = character(left)?.mul(&character(right)?);
    let chars = basis.iter().map(|&l| character(l)).collect::<Result<Vec<_>>>()?;
    // pivot inversions cost precision in the coefficients; deepen until they are exact below `order`
    let mut work = order;
    let mut best = int(0);
    for _ in 0..8 {
        let d = decompose_lazy(&target, &chars, work)?;
        let reached = d
            .coefficients
            .iter()
            .map(|c| c.cutoff())
            .fold(work, rat::min);
        if reached >= order {
            let mut decomposition = d;
            decomposition.coefficients = decomposition.coefficients.iter().map(|c| c.truncate(order)).collect();
            decomposition.residual = decomposition.residual.truncate(order);
            decomposition.certified_order = rat::min(decomposition.certified_order, order);
            return Ok(Branching {
                left,
                right,
                basis,
                decomposition,
            });
        }
        best = rat::max(best, reached);
        work += order - reached + int(1);
    }
    Err(Error::InfeasibleOrder {
        requested: order,
        max: best,
    })
}
