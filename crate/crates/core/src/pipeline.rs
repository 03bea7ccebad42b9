//! End-to-end runs on the built-in families: enumeration, kernel
//! certification, action matrices, quotients and polytope reports.

use serde::Serialize;

use crate::action::{action_matrices, verify_action_relations, ActionPair};
use crate::coset::{enumerate, EnumConfig};
use crate::error::{Error, Result};
use crate::kernel::{certify_free_abelian_rank4, CoordinateMap};
use crate::perm::{derived_series, image_of_table, DerivedSeries, DEFAULT_DEGREE_BOUND};
use crate::polytope::{certify, PolytopeReport, Verdict, WordGroup};
use crate::presets::{self, CaseData};
use crate::quotient::{build_pair_group, compare_with_table, direct_table, CrossValidation, PairGroup, DEFAULT_ORDER_CAP};
use crate::word::Word;

/// Where a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Enumerate,
    Kernel,
    Action,
    Quotient,
    Polytope,
    CrossValidate,
    Solvability,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).expect("stage serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

fn at<T>(stage: Stage, r: Result<T>) -> std::result::Result<T, StageError> {
    r.map_err(|source| StageError { stage, source })
}

/// One expected value compared with what was computed.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub stage: Stage,
    pub name: String,
    pub expected: String,
    pub found: String,
    pub ok: bool,
}

impl Claim {
    fn new(stage: Stage, name: &str, expected: impl ToString, found: impl ToString) -> Self {
        let (expected, found) = (expected.to_string(), found.to_string());
        Claim {
            stage,
            name: name.into(),
            ok: expected == found,
            expected,
            found,
        }
    }
}

/// The part of a run that does not depend on `m`.
#[derive(Clone, Debug)]
pub struct CaseKernel {
    pub case: CaseData,
    pub index: usize,
    pub normal: bool,
    pub map: CoordinateMap,
    pub action: ActionPair,
    pub relations_hold: bool,
    /// Derived series of `U/N`.
    pub top_series: DerivedSeries,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub enum_config: EnumConfig,
    /// Cross-validate and take the derived series directly when the order
    /// is at most this.
    pub direct_limit: u64,
    /// Test hook: flip the sign of one action-matrix entry.
    pub mutate_table: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions::new(EnumConfig::default())
    }
}

impl RunOptions {
    pub fn new(enum_config: EnumConfig) -> Self {
        RunOptions {
            enum_config,
            direct_limit: 20_000,
            mutate_table: false,
        }
    }
}

pub fn prepare_case(case: &CaseData, opts: &RunOptions) -> std::result::Result<CaseKernel, StageError> {
    let u = presets::group_u();
    let t = at(Stage::Enumerate, enumerate(&u, &case.basis, &opts.enum_config))?;
    if !t.is_complete() {
        return Err(StageError {
            stage: Stage::Enumerate,
            source: Error::Resource(format!("enumeration stopped after {} cosets", t.defined_count())),
        });
    }
    let normal = at(Stage::Enumerate, t.is_normal())?;
    let map = at(Stage::Kernel, certify_free_abelian_rank4(&u, &t, &case.basis))?;
    let mut action = at(Stage::Action, action_matrices(&map))?;
    if opts.mutate_table {
        let e = &mut action.matrices[0][(0, 1)];
        *e = -e.clone();
    }
    let relations_hold = match verify_action_relations(&action, &u) {
        Ok(v) => v,
        Err(Error::Validation(_)) => false,
        Err(e) => return Err(StageError { stage: Stage::Action, source: e }),
    };
    let top = at(Stage::Solvability, image_of_table(&t))?;
    let top_series = at(Stage::Solvability, derived_series(&top, DEFAULT_DEGREE_BOUND))?;
    Ok(CaseKernel {
        case: case.clone(),
        index: t.live_count(),
        normal,
        map,
        action,
        relations_hold,
        top_series,
    })
}

impl CaseKernel {
    /// Claims that hold for every `m`.
    pub fn claims(&self) -> Vec<Claim> {
        let c = &self.case;
        let mut out = vec![
            Claim::new(Stage::Enumerate, "index", c.index, self.index),
            Claim::new(Stage::Enumerate, "normal", true, self.normal),
            Claim::new(Stage::Kernel, "free abelian rank 4", true, self.map.summary().is_free_abelian_rank4()),
        ];
        let rows = self.action.rows_i64();
        for (g, name) in ["a", "b"].iter().enumerate() {
            for i in 0..4 {
                out.push(Claim::new(
                    Stage::Action,
                    &format!("{}{}^{}", c.stem, i + 1, name),
                    format!("{:?}", c.conjugation[g][i]),
                    format!("{:?}", rows[g][i]),
                ));
            }
        }
        out.push(Claim::new(Stage::Action, "action relations", true, self.relations_hold));
        out.push(Claim::new(Stage::Solvability, "U/N solvable", true, self.top_series.is_solvable()));
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessOrders {
    pub mirror_image: u64,
    pub variant: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub case: u8,
    pub m: u64,
    pub order: String,
    pub validated: bool,
    pub generator_orders: [u64; 3],
    pub witness_orders: WitnessOrders,
    pub polytope: PolytopeReport,
    pub cross_validation: Option<CrossValidation>,
    pub derived_series: Option<DerivedSeries>,
    pub solvable: bool,
    pub claims: Vec<Claim>,
}

impl FamilyReport {
    pub fn all_claims_hold(&self) -> bool {
        self.claims.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Claim> {
        self.claims.iter().find(|c| !c.ok)
    }
}

pub fn family(kernel: &CaseKernel, m: u64, opts: &RunOptions) -> std::result::Result<(PairGroup, FamilyReport), StageError> {
    let case = &kernel.case;
    let g = at(Stage::Quotient, build_pair_group(case, m, &kernel.map))?;
    let (a, b) = (Word::gen(0), Word::gen(1));
    let ord = |w: &Word| at(Stage::Quotient, g.element_order_pair(w, DEFAULT_ORDER_CAP));
    let generator_orders = [ord(&a)?, ord(&b)?, ord(&(&a * &b))?];
    let witness_orders = WitnessOrders {
        mirror_image: ord(&presets::mirror_witness())?,
        variant: ord(&presets::variant_witness())?,
    };
    let polytope = at(Stage::Polytope, certify(&g, g.presentation()))?;
    let order = WordGroup::order(&g).map_err(|source| StageError { stage: Stage::Quotient, source })?;

    let mut cross = None;
    let mut series = None;
    if polytope.order <= opts.direct_limit {
        let words = [a.clone(), b.clone(), &a * &b, presets::mirror_witness(), presets::variant_witness()];
        let limit = opts.enum_config.max_cosets.max(4 * polytope.order as usize);
        let t = at(Stage::CrossValidate, direct_table(&g, limit))?;
        cross = Some(at(Stage::CrossValidate, compare_with_table(&g, &t, &words))?);
        let img = at(Stage::Solvability, image_of_table(&t))?;
        series = Some(at(Stage::Solvability, derived_series(&img, DEFAULT_DEGREE_BOUND))?);
    }
    // N/N_m is abelian and normal, so G_m is solvable iff U/N is.
    let solvable = match &series {
        Some(s) => s.is_solvable(),
        None => kernel.top_series.is_solvable() && kernel.map.summary().is_free_abelian_rank4(),
    };

    let mut claims = kernel.claims();
    let expected_order = num_bigint::BigUint::from(case.index) * num_bigint::BigUint::from(m).pow(4);
    claims.push(Claim::new(Stage::Quotient, "order", &expected_order, &order));
    claims.push(Claim::new(Stage::Polytope, "type", "{4,8}", format!("{{{},{}}}", polytope.k1, polytope.k2)));
    claims.push(Claim::new(Stage::Polytope, "order(ab)", 2, polytope.k12));
    claims.push(Claim::new(Stage::Polytope, "intersection", 1, polytope.intersection));
    claims.push(Claim::new(Stage::Polytope, "verdict", Verdict::Chiral, polytope.verdict));
    if let Some(cv) = &cross {
        claims.push(Claim::new(Stage::CrossValidate, "direct index", &expected_order, cv.direct_index));
        claims.push(Claim::new(Stage::CrossValidate, "orders agree", true, cv.agree));
    }
    claims.push(Claim::new(Stage::Solvability, "solvable", true, solvable));

    let report = FamilyReport {
        case: case.id,
        m,
        order: order.to_string(),
        validated: true,
        generator_orders,
        witness_orders,
        polytope,
        cross_validation: cross,
        derived_series: series,
        solvable,
        claims,
    };
    Ok((g, report))
}

/// Runs every `(case, m)` for `m` in `1..=m_max` in parallel, one kernel
/// per case.
pub fn grid(cases: &[CaseData], m_max: u64, opts: &RunOptions) -> Vec<std::result::Result<FamilyReport, (u8, u64, StageError)>> {
    use rayon::prelude::*;
    let kernels: Vec<_> = cases.par_iter().map(|c| (c.id, prepare_case(c, opts))).collect();
    let jobs: Vec<(usize, u64)> = (0..kernels.len()).flat_map(|k| (1..=m_max).map(move |m| (k, m))).collect();
    jobs.par_iter()
        .map(|&(k, m)| {
            let (id, kernel) = &kernels[k];
            match kernel {
                Ok(kernel) => family(kernel, m, opts).map(|(_, r)| r).map_err(|e| (*id, m, e)),
                Err(e) => Err((
                    *id,
                    m,
                    StageError {
                        stage: e.stage,
                        source: Error::Validation(e.source.to_string()),
                    },
                )),
            }
        })
        .collect()
}
